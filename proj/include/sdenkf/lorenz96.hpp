#pragma once

#include <Eigen/Core>

namespace sdenkf {

struct Lorenz96Config {
  int dimension = 256;        // K
  double forcing = 8.0;       // F
  double dt = 0.01;           // integrator step, model seconds
  int steps_per_cycle = 100;  // 1 s analysis cycle
};

/// dx_j/dt = x_{j-1} x_{j+1} - x_{j-1} x_{j-2} - x_j + F, cyclic indices.
Eigen::VectorXd lorenz96_rhs(const Eigen::VectorXd& x, double forcing);

/// One RK4 step of size cfg.dt. Throws on non-finite state (blow-up).
Eigen::VectorXd lorenz96_step(const Eigen::VectorXd& x,
                              const Lorenz96Config& cfg);

Eigen::VectorXd lorenz96_advance(Eigen::VectorXd x, const Lorenz96Config& cfg,
                                 int steps);

}  // namespace sdenkf
