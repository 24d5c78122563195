#include <doctest.h>

#include <cmath>

#include "sdenkf/lorenz96.hpp"
#include "sdenkf/shallow_water.hpp"

using namespace sdenkf;

TEST_CASE("cyclic right-hand side by hand at K = 4") {
  Eigen::VectorXd x(4);
  x << 1, 2, 3, 4;
  const Eigen::VectorXd f = lorenz96_rhs(x, 8.0);
  // dx_j = x_{j-1}(x_{j+1} - x_{j-2}) - x_j + F, indices mod 4
  CHECK(f(0) == doctest::Approx(4 * (2 - 3) - 1 + 8));
  CHECK(f(1) == doctest::Approx(1 * (3 - 4) - 2 + 8));
  CHECK(f(2) == doctest::Approx(2 * (4 - 1) - 3 + 8));
  CHECK(f(3) == doctest::Approx(3 * (1 - 2) - 4 + 8));
}

TEST_CASE("constant state x = F is an equilibrium") {
  Lorenz96Config cfg;
  cfg.dimension = 16;
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(16, cfg.forcing);
  CHECK(lorenz96_rhs(x, cfg.forcing).cwiseAbs().maxCoeff() < 1e-14);
  const Eigen::VectorXd y = lorenz96_advance(x, cfg, 50);
  CHECK((y - x).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("integrator is fourth order") {
  Lorenz96Config coarse;
  coarse.dimension = 8;
  coarse.dt = 0.01;
  Lorenz96Config fine = coarse;
  fine.dt = 0.005;
  Lorenz96Config finest = coarse;
  finest.dt = 0.0025;
  Eigen::VectorXd x0 = Eigen::VectorXd::Constant(8, 8.0);
  x0(0) += 0.01;
  const Eigen::VectorXd a = lorenz96_advance(x0, coarse, 100);
  const Eigen::VectorXd b = lorenz96_advance(x0, fine, 200);
  const Eigen::VectorXd c = lorenz96_advance(x0, finest, 400);
  const double ratio = (a - b).norm() / (b - c).norm();
  // halving dt should shrink the error ~16x for a 4th-order method
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("rest water stays at rest") {
  ShallowWaterConfig cfg;
  cfg.nx = 16;
  cfg.ny = 16;
  ShallowWaterState s;
  s.h = Eigen::MatrixXd::Constant(16, 16, cfg.base_height);
  s.hu = Eigen::MatrixXd::Zero(16, 16);
  s.hv = Eigen::MatrixXd::Zero(16, 16);
  const ShallowWaterState t = shallow_water_advance(s, cfg, 100);
  CHECK((t.h.array() - cfg.base_height).abs().maxCoeff() < 1e-10);
  CHECK(t.hu.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(t.hv.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("reflective walls conserve mass") {
  ShallowWaterConfig cfg;
  cfg.nx = 16;
  cfg.ny = 16;
  cfg.bump_width = 8.0;
  ShallowWaterState s = make_initial_conditions(cfg, InitialCondition::Truth);
  const double m0 = total_mass(s, cfg);
  s = shallow_water_advance(std::move(s), cfg, 1000);
  CHECK(std::abs(total_mass(s, cfg) - m0) < 1e-8 * m0);
}

TEST_CASE("centered bump keeps the quarter-turn symmetry") {
  ShallowWaterConfig cfg;
  cfg.nx = 16;
  cfg.ny = 16;
  cfg.bump_width = 8.0;
  ShallowWaterState s = make_initial_conditions(cfg, InitialCondition::Truth);
  s = shallow_water_advance(std::move(s), cfg, 500);
  // h is symmetric under both axis reflections for a centered bump
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      CHECK(s.h(i, j) == doctest::Approx(s.h(15 - i, j)).epsilon(1e-8));
      CHECK(s.h(i, j) == doctest::Approx(s.h(i, 15 - j)).epsilon(1e-8));
    }
}

TEST_CASE("initial bump carries the configured mass anomaly") {
  ShallowWaterConfig cfg;
  cfg.nx = 32;
  cfg.ny = 32;
  cfg.bump_width = 8.0;
  const ShallowWaterState s =
      make_initial_conditions(cfg, InitialCondition::Truth);
  const double anomaly =
      (s.h.array() - cfg.base_height).sum();
  // 2-D Gaussian integral: height * pi * sigma^2, sigma = width/2
  const double sigma = cfg.bump_width / 2.0;
  const double expected = cfg.bump_height * M_PI * sigma * sigma;
  CHECK(std::abs(anomaly - expected) < 0.02 * expected);
}

TEST_CASE("flatten and unflatten round trip") {
  ShallowWaterConfig cfg;
  cfg.nx = 4;
  cfg.ny = 3;
  ShallowWaterState s = make_initial_conditions(cfg, InitialCondition::Truth);
  s.hu(1, 2) = 5.0;
  const Eigen::VectorXd v = flatten(s);
  CHECK(v.size() == 36);
  CHECK(v(0) == s.h(0, 0));
  CHECK(v(1) == s.h(0, 1));
  CHECK(v(12 + 1 * 3 + 2) == 5.0);
  const ShallowWaterState t = unflatten(v, cfg);
  CHECK((t.h - s.h).cwiseAbs().maxCoeff() == 0.0);
  CHECK((t.hu - s.hu).cwiseAbs().maxCoeff() == 0.0);
  CHECK((t.hv - s.hv).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("background run starts from the offset bump") {
  ShallowWaterConfig cfg;
  cfg.nx = 32;
  cfg.ny = 32;
  cfg.bump_width = 8.0;
  cfg.background_offset_x = 4.0;
  const ShallowWaterState truth =
      make_initial_conditions(cfg, InitialCondition::Truth);
  const ShallowWaterState bg =
      make_initial_conditions(cfg, InitialCondition::Background);
  CHECK((truth.h - bg.h).cwiseAbs().maxCoeff() > 1.0);
  // the offset shifts the bump along x by 4 nodes
  int ti, tj, bi, bj;
  truth.h.maxCoeff(&ti, &tj);
  bg.h.maxCoeff(&bi, &bj);
  CHECK(bi - ti == 4);
  CHECK(bj == tj);
}
