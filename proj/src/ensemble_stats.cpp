#include "sdenkf/ensemble_stats.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace sdenkf {

Eigen::VectorXd sample_mean(const Ensemble& e) {
  if (e.cols() < 1) throw std::invalid_argument("sample_mean: empty ensemble");
  return e.rowwise().mean();
}

Eigen::MatrixXd sample_covariance(const Ensemble& e) {
  if (e.cols() < 2)
    throw std::invalid_argument("sample_covariance: need N >= 2");
  if (e.rows() > kDenseSizeGuard)
    throw std::invalid_argument("sample_covariance: size guard tripped");
  const Eigen::MatrixXd dev = e.colwise() - sample_mean(e).eval();
  return dev * dev.transpose() / static_cast<double>(e.cols() - 1);
}

Eigen::VectorXd spectral_diagonal(const Ensemble& e_spectral) {
  if (e_spectral.cols() < 2)
    throw std::invalid_argument("spectral_diagonal: need N >= 2");
  const Eigen::MatrixXd dev =
      e_spectral.colwise() - sample_mean(e_spectral).eval();
  return dev.array().square().rowwise().sum() /
         static_cast<double>(e_spectral.cols() - 1);
}

CrossDiagonalBlocks cross_diagonals(const Ensemble& e_spectral, int m) {
  if (e_spectral.cols() < 2)
    throw std::invalid_argument("cross_diagonals: need N >= 2");
  if (m <= 0 || e_spectral.rows() % m != 0)
    throw std::invalid_argument(
        "cross_diagonals: state length not divisible by variable count");
  const int n = static_cast<int>(e_spectral.rows()) / m;
  const double denom = static_cast<double>(e_spectral.cols() - 1);
  const Eigen::MatrixXd dev =
      e_spectral.colwise() - sample_mean(e_spectral).eval();
  CrossDiagonalBlocks out(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      Eigen::VectorXd d =
          (dev.middleRows(i * n, n).array() * dev.middleRows(j * n, n).array())
              .rowwise()
              .sum() /
          denom;
      out.block(i, j) = d;
      if (i != j) out.block(j, i) = d;
    }
  }
  return out;
}

Eigen::MatrixXd taper_matrix(const TaperSpec& spec, int nx, int ny, int m) {
  const int n = nx * ny;
  Eigen::MatrixXd A(n, n);
  for (int a = 0; a < n; ++a) {
    const int ia = a / ny, ja = a % ny;
    for (int b = 0; b < n; ++b) {
      const int ib = b / ny, jb = b % ny;
      A(a, b) = std::exp(-spec.decay * std::abs(ia - ib)) *
                std::exp(-spec.decay * std::abs(ja - jb));
    }
  }
  Eigen::MatrixXd T(n * m, n * m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      T.block(p * n, q * n, n, n) = (p == q ? 1.0 : spec.block_scale) * A;
  return T;
}

Eigen::MatrixXd taper_covariance(const Eigen::MatrixXd& C,
                                 const TaperSpec& spec, int nx, int ny,
                                 int m) {
  if (C.rows() != C.cols() || C.rows() != static_cast<Eigen::Index>(m) * nx * ny)
    throw std::invalid_argument("taper_covariance: dimension mismatch");
  return C.cwiseProduct(taper_matrix(spec, nx, ny, m));
}

Ensemble sample_gaussian_perturbations(const Eigen::MatrixXd& B, int count,
                                       Rng& rng) {
  if (B.rows() != B.cols())
    throw std::invalid_argument("sample_gaussian_perturbations: B not square");
  const double scale = B.cwiseAbs().maxCoeff();
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (scale + 1.0))
    throw std::invalid_argument(
        "sample_gaussian_perturbations: B not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (B + B.transpose()));
  if (es.eigenvalues().minCoeff() < -1e-8 * (scale + 1.0))
    throw std::invalid_argument(
        "sample_gaussian_perturbations: B indefinite beyond tolerance");
  const Eigen::VectorXd sqrt_ev =
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root =
      es.eigenvectors() * sqrt_ev.asDiagonal();
  return root * rng.normal_matrix(B.rows(), count);
}

}  // namespace sdenkf
