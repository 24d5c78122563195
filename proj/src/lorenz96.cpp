#include "sdenkf/lorenz96.hpp"

#include <stdexcept>

namespace sdenkf {

Eigen::VectorXd lorenz96_rhs(const Eigen::VectorXd& x, double forcing) {
  const int k = static_cast<int>(x.size());
  if (k < 4) throw std::invalid_argument("lorenz96_rhs: need K >= 4");
  Eigen::VectorXd out(k);
  for (int j = 0; j < k; ++j) {
    const double xm1 = x((j - 1 + k) % k);
    const double xm2 = x((j - 2 + k) % k);
    const double xp1 = x((j + 1) % k);
    out(j) = xm1 * xp1 - xm1 * xm2 - x(j) + forcing;
  }
  return out;
}

Eigen::VectorXd lorenz96_step(const Eigen::VectorXd& x,
                              const Lorenz96Config& cfg) {
  const double h = cfg.dt;
  const Eigen::VectorXd k1 = lorenz96_rhs(x, cfg.forcing);
  const Eigen::VectorXd k2 = lorenz96_rhs(x + 0.5 * h * k1, cfg.forcing);
  const Eigen::VectorXd k3 = lorenz96_rhs(x + 0.5 * h * k2, cfg.forcing);
  const Eigen::VectorXd k4 = lorenz96_rhs(x + h * k3, cfg.forcing);
  Eigen::VectorXd out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite())
    throw std::runtime_error("lorenz96_step: state blew up");
  return out;
}

Eigen::VectorXd lorenz96_advance(Eigen::VectorXd x, const Lorenz96Config& cfg,
                                 int steps) {
  for (int s = 0; s < steps; ++s) x = lorenz96_step(x, cfg);
  return x;
}

}  // namespace sdenkf
