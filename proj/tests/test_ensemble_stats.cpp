#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "sdenkf/ensemble_stats.hpp"
#include "sdenkf/transforms.hpp"

using namespace sdenkf;

TEST_CASE("sample mean and covariance, hand example") {
  Ensemble e(2, 2);
  e.col(0) << 1, 2;
  e.col(1) << 3, 4;
  const Eigen::VectorXd mu = sample_mean(e);
  CHECK(mu(0) == doctest::Approx(2.0));
  CHECK(mu(1) == doctest::Approx(3.0));
  const Eigen::MatrixXd c = sample_covariance(e);
  // deviations are (-1,-1) and (1,1); divisor N-1 = 1
  CHECK(c(0, 0) == doctest::Approx(2.0));
  CHECK(c(0, 1) == doctest::Approx(2.0));
  CHECK(c(1, 0) == doctest::Approx(2.0));
  CHECK(c(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("covariance guards") {
  CHECK_THROWS_AS(sample_covariance(Ensemble::Zero(3, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_covariance(Ensemble::Zero(kDenseSizeGuard + 1, 4)),
                  std::invalid_argument);
}

TEST_CASE("spectral diagonal equals the diagonal of the dense covariance") {
  Rng rng(31);
  const Ensemble e = rng.normal_matrix(12, 6);
  const Eigen::VectorXd d = spectral_diagonal(e);
  const Eigen::VectorXd dd = sample_covariance(e).diagonal();
  CHECK((d - dd).norm() < 1e-12);
}

TEST_CASE("covariance rank is at most N-1") {
  Rng rng(37);
  const Ensemble e = rng.normal_matrix(10, 4);
  const Eigen::MatrixXd c = sample_covariance(e);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  int positive = 0;
  for (int i = 0; i < 10; ++i)
    if (es.eigenvalues()(i) > 1e-12) ++positive;
  CHECK(positive <= 3);
}

TEST_CASE("cross diagonals against dense blocks") {
  Rng rng(41);
  const int n = 8, m = 3, big = n * m;
  const Ensemble e = rng.normal_matrix(big, 5);
  const CrossDiagonalBlocks cd = cross_diagonals(e, m);
  const Eigen::MatrixXd c = sample_covariance(e);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Eigen::VectorXd ref = c.block(i * n, j * n, n, n).diagonal();
      CHECK((cd.block(i, j) - ref).norm() < 1e-12);
      CHECK((cd.block(i, j) - cd.block(j, i)).norm() < 1e-12);
    }
}

TEST_CASE("taper matrix shape and positive semidefiniteness") {
  const TaperSpec spec;
  const int nx = 4, ny = 3, m = 2;
  const Eigen::MatrixXd t = taper_matrix(spec, nx, ny, m);
  const int n = nx * ny;
  CHECK(t.rows() == n * m);
  CHECK((t - t.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  for (int a = 0; a < n; ++a) {
    CHECK(t(a, a) == doctest::Approx(1.0));
    CHECK(t(a, n + a) == doctest::Approx(spec.block_scale));
  }
  // node (0,0) vs (1,2): exp(-1)*exp(-2)
  CHECK(t(0, 1 * ny + 2) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("tapered covariance is the Schur product") {
  Rng rng(43);
  const int nx = 3, ny = 3, m = 2, big = nx * ny * m;
  const Ensemble e = rng.normal_matrix(big, 30);
  const Eigen::MatrixXd c = sample_covariance(e);
  const TaperSpec spec;
  const Eigen::MatrixXd t = taper_matrix(spec, nx, ny, m);
  const Eigen::MatrixXd bt = taper_covariance(c, spec, nx, ny, m);
  CHECK((bt - c.cwiseProduct(t)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gaussian perturbations have the requested covariance") {
  Rng rng(47);
  Eigen::MatrixXd b(3, 3);
  b << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  const int count = 200000;
  const Ensemble draws = sample_gaussian_perturbations(b, count, rng);
  const Eigen::VectorXd mu = sample_mean(draws);
  CHECK(mu.cwiseAbs().maxCoeff() < 0.05);
  const Eigen::MatrixXd c = sample_covariance(draws);
  CHECK((c - b).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("gaussian sampling rejects asymmetric and indefinite input") {
  Rng rng(53);
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 0.5, -0.5, 1;
  CHECK_THROWS_AS(sample_gaussian_perturbations(bad, 2, rng),
                  std::invalid_argument);
  Eigen::MatrixXd indef(2, 2);
  indef << 1, 2, 2, 1;
  CHECK_THROWS_AS(sample_gaussian_perturbations(indef, 2, rng),
                  std::invalid_argument);
}
