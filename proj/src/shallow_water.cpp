#include "sdenkf/shallow_water.hpp"

#include <cmath>
#include <stdexcept>

namespace sdenkf {

namespace {

// ghost-augmented copy with reflective walls
void fill_ghost(Eigen::MatrixXd& h, Eigen::MatrixXd& hu, Eigen::MatrixXd& hv,
                const ShallowWaterState& s, int nx, int ny) {
  h.setZero(nx + 2, ny + 2);
  hu.setZero(nx + 2, ny + 2);
  hv.setZero(nx + 2, ny + 2);
  h.block(1, 1, nx, ny) = s.h;
  hu.block(1, 1, nx, ny) = s.hu;
  hv.block(1, 1, nx, ny) = s.hv;
  // x walls: mirror h and tangential momentum, negate normal momentum
  h.row(0) = h.row(1);
  h.row(nx + 1) = h.row(nx);
  hu.row(0) = -hu.row(1);
  hu.row(nx + 1) = -hu.row(nx);
  hv.row(0) = hv.row(1);
  hv.row(nx + 1) = hv.row(nx);
  // y walls
  h.col(0) = h.col(1);
  h.col(ny + 1) = h.col(ny);
  hu.col(0) = hu.col(1);
  hu.col(ny + 1) = hu.col(ny);
  hv.col(0) = -hv.col(1);
  hv.col(ny + 1) = -hv.col(ny);
}

}  // namespace

ShallowWaterState make_initial_conditions(const ShallowWaterConfig& cfg,
                                          InitialCondition which) {
  const double sigma = cfg.bump_width / 2.0;  // e^{-1} at distance sigma
  double cx = (cfg.nx - 1) / 2.0;
  double cy = (cfg.ny - 1) / 2.0;
  if (which == InitialCondition::Background) {
    cx += cfg.background_offset_x;
    cy += cfg.background_offset_y;
  }
  ShallowWaterState s;
  s.h.resize(cfg.nx, cfg.ny);
  s.hu = Eigen::MatrixXd::Zero(cfg.nx, cfg.ny);
  s.hv = Eigen::MatrixXd::Zero(cfg.nx, cfg.ny);
  for (int i = 0; i < cfg.nx; ++i)
    for (int j = 0; j < cfg.ny; ++j) {
      const double r2 = (i - cx) * (i - cx) + (j - cy) * (j - cy);
      s.h(i, j) =
          cfg.base_height + cfg.bump_height * std::exp(-r2 / (sigma * sigma));
    }
  return s;
}

ShallowWaterState shallow_water_step(const ShallowWaterState& s,
                                     const ShallowWaterConfig& cfg) {
  const int nx = cfg.nx, ny = cfg.ny;
  if (s.h.rows() != nx || s.h.cols() != ny)
    throw std::invalid_argument("shallow_water_step: grid mismatch");
  const double g = cfg.gravity;
  const double hmax = s.h.maxCoeff();
  if (s.h.minCoeff() <= 0.0)
    throw std::runtime_error("shallow_water_step: nonpositive water level");
  if (cfg.dt * std::sqrt(g * hmax) / cfg.dx >= 1.0)
    throw std::runtime_error("shallow_water_step: CFL violation");

  Eigen::MatrixXd h, hu, hv;
  fill_ghost(h, hu, hv, s, nx, ny);

  const double lx = cfg.dt / (2.0 * cfg.dx);
  const double ly = cfg.dt / (2.0 * cfg.dx);

  // half-step values at x interfaces (i+1/2, j), i = 0..nx, j = 1..ny
  Eigen::MatrixXd hx(nx + 1, ny), hux(nx + 1, ny), hvx(nx + 1, ny);
  for (int i = 0; i <= nx; ++i)
    for (int j = 1; j <= ny; ++j) {
      const double fh0 = hu(i, j), fh1 = hu(i + 1, j);
      const double fu0 = hu(i, j) * hu(i, j) / h(i, j) + 0.5 * g * h(i, j) * h(i, j);
      const double fu1 = hu(i + 1, j) * hu(i + 1, j) / h(i + 1, j) +
                         0.5 * g * h(i + 1, j) * h(i + 1, j);
      const double fv0 = hu(i, j) * hv(i, j) / h(i, j);
      const double fv1 = hu(i + 1, j) * hv(i + 1, j) / h(i + 1, j);
      hx(i, j - 1) = 0.5 * (h(i, j) + h(i + 1, j)) - lx * (fh1 - fh0);
      hux(i, j - 1) = 0.5 * (hu(i, j) + hu(i + 1, j)) - lx * (fu1 - fu0);
      hvx(i, j - 1) = 0.5 * (hv(i, j) + hv(i + 1, j)) - lx * (fv1 - fv0);
    }

  // half-step values at y interfaces (i, j+1/2), i = 1..nx, j = 0..ny
  Eigen::MatrixXd hy(nx, ny + 1), huy(nx, ny + 1), hvy(nx, ny + 1);
  for (int i = 1; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) {
      const double fh0 = hv(i, j), fh1 = hv(i, j + 1);
      const double fu0 = hu(i, j) * hv(i, j) / h(i, j);
      const double fu1 = hu(i, j + 1) * hv(i, j + 1) / h(i, j + 1);
      const double fv0 = hv(i, j) * hv(i, j) / h(i, j) + 0.5 * g * h(i, j) * h(i, j);
      const double fv1 = hv(i, j + 1) * hv(i, j + 1) / h(i, j + 1) +
                         0.5 * g * h(i, j + 1) * h(i, j + 1);
      hy(i - 1, j) = 0.5 * (h(i, j) + h(i, j + 1)) - ly * (fh1 - fh0);
      huy(i - 1, j) = 0.5 * (hu(i, j) + hu(i, j + 1)) - ly * (fu1 - fu0);
      hvy(i - 1, j) = 0.5 * (hv(i, j) + hv(i, j + 1)) - ly * (fv1 - fv0);
    }

  const double kx = cfg.dt / cfg.dx;
  const double ky = cfg.dt / cfg.dx;
  ShallowWaterState out;
  out.h.resize(nx, ny);
  out.hu.resize(nx, ny);
  out.hv.resize(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      // x fluxes at (i-1/2, j) and (i+1/2, j) from half-step values
      const double fxh_l = hux(i, j);
      const double fxh_r = hux(i + 1, j);
      const double fxu_l = hux(i, j) * hux(i, j) / hx(i, j) +
                           0.5 * g * hx(i, j) * hx(i, j);
      const double fxu_r = hux(i + 1, j) * hux(i + 1, j) / hx(i + 1, j) +
                           0.5 * g * hx(i + 1, j) * hx(i + 1, j);
      const double fxv_l = hux(i, j) * hvx(i, j) / hx(i, j);
      const double fxv_r = hux(i + 1, j) * hvx(i + 1, j) / hx(i + 1, j);
      // y fluxes at (i, j-1/2) and (i, j+1/2)
      const double fyh_l = hvy(i, j);
      const double fyh_r = hvy(i, j + 1);
      const double fyu_l = huy(i, j) * hvy(i, j) / hy(i, j);
      const double fyu_r = huy(i, j + 1) * hvy(i, j + 1) / hy(i, j + 1);
      const double fyv_l = hvy(i, j) * hvy(i, j) / hy(i, j) +
                           0.5 * g * hy(i, j) * hy(i, j);
      const double fyv_r = hvy(i, j + 1) * hvy(i, j + 1) / hy(i, j + 1) +
                           0.5 * g * hy(i, j + 1) * hy(i, j + 1);
      out.h(i, j) = s.h(i, j) - kx * (fxh_r - fxh_l) - ky * (fyh_r - fyh_l);
      out.hu(i, j) = s.hu(i, j) - kx * (fxu_r - fxu_l) - ky * (fyu_r - fyu_l);
      out.hv(i, j) = s.hv(i, j) - kx * (fxv_r - fxv_l) - ky * (fyv_r - fyv_l);
    }
  if (!out.h.allFinite() || !out.hu.allFinite() || !out.hv.allFinite())
    throw std::runtime_error("shallow_water_step: state blew up");
  return out;
}

ShallowWaterState shallow_water_advance(ShallowWaterState s,
                                        const ShallowWaterConfig& cfg,
                                        int steps) {
  for (int k = 0; k < steps; ++k) s = shallow_water_step(s, cfg);
  return s;
}

double total_mass(const ShallowWaterState& s, const ShallowWaterConfig& cfg) {
  return s.h.sum() * cfg.dx * cfg.dx;
}

Eigen::VectorXd flatten(const ShallowWaterState& s) {
  const int nx = static_cast<int>(s.h.rows());
  const int ny = static_cast<int>(s.h.cols());
  const int n = nx * ny;
  Eigen::VectorXd v(3 * n);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int idx = i * ny + j;
      v(idx) = s.h(i, j);
      v(n + idx) = s.hu(i, j);
      v(2 * n + idx) = s.hv(i, j);
    }
  return v;
}

ShallowWaterState unflatten(const Eigen::VectorXd& v,
                            const ShallowWaterConfig& cfg) {
  const int n = cfg.nx * cfg.ny;
  if (v.size() != 3 * n)
    throw std::invalid_argument("unflatten: length mismatch");
  ShallowWaterState s;
  s.h.resize(cfg.nx, cfg.ny);
  s.hu.resize(cfg.nx, cfg.ny);
  s.hv.resize(cfg.nx, cfg.ny);
  for (int i = 0; i < cfg.nx; ++i)
    for (int j = 0; j < cfg.ny; ++j) {
      const int idx = i * cfg.ny + j;
      s.h(i, j) = v(idx);
      s.hu(i, j) = v(n + idx);
      s.hv(i, j) = v(2 * n + idx);
    }
  return s;
}

}  // namespace sdenkf
