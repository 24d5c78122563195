#pragma once

#include <vector>

#include <Eigen/Core>

#include "sdenkf/rng.hpp"

namespace sdenkf {

/// Ensembles are n_state-by-N matrices, columns are members.
using Ensemble = Eigen::MatrixXd;

/// Dense matrices above this size are refused (accidental O(n^2) guard).
inline constexpr int kDenseSizeGuard = 4096;

Eigen::VectorXd sample_mean(const Ensemble& e);

/// Unbiased sample covariance, divisor N-1. Dense; small n only.
Eigen::MatrixXd sample_covariance(const Ensemble& e);

/// Per-mode sample variances of an ensemble already in spectral space;
/// the diagonal of the spectral sample covariance, never formed densely.
Eigen::VectorXd spectral_diagonal(const Ensemble& e_spectral);

/// Per-mode cross-covariances between the m length-n variable blocks of
/// a spectral ensemble. block(i,j) holds the diagonal of the sample
/// cross-covariance between blocks i and j; symmetric in (i,j).
class CrossDiagonalBlocks {
 public:
  CrossDiagonalBlocks(int m, int n)
      : m_(m), n_(n), blocks_(static_cast<size_t>(m) * m) {}

  int variable_count() const { return m_; }
  int block_length() const { return n_; }
  Eigen::VectorXd& block(int i, int j) { return blocks_[i * m_ + j]; }
  const Eigen::VectorXd& block(int i, int j) const {
    return blocks_[i * m_ + j];
  }

 private:
  int m_;
  int n_;
  std::vector<Eigen::VectorXd> blocks_;
};

CrossDiagonalBlocks cross_diagonals(const Ensemble& e_spectral, int m);

/// Taper shape: within-variable blocks use A, cross-variable blocks
/// block_scale*A, where A_{a,b} = exp(-decay*|ia-ib|)*exp(-decay*|ja-jb|)
/// between grid nodes a=(ia,ja), b=(ib,jb) (row-major, index = i*ny + j).
struct TaperSpec {
  double block_scale = 0.9;
  double decay = 1.0;
};

Eigen::MatrixXd taper_matrix(const TaperSpec& spec, int nx, int ny, int m);

/// Schur product C o T for an m-variable field on an nx-by-ny grid.
Eigen::MatrixXd taper_covariance(const Eigen::MatrixXd& C,
                                 const TaperSpec& spec, int nx, int ny, int m);

/// N zero-mean draws with covariance B, via the symmetric
/// eigendecomposition square root with negative eigenvalues clamped.
Ensemble sample_gaussian_perturbations(const Eigen::MatrixXd& B, int count,
                                       Rng& rng);

}  // namespace sdenkf
