#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

namespace sdenkf {

enum class TransformKind { Identity, DCT, DST, DWT };
enum class Wavelet { Coiflet2, Daubechies2 };
enum class Layout { OneD, TwoDTensor };

/// Orthonormal spectral transform with matrix-free forward/inverse
/// actions on vectors and ensembles (columns = ensemble members).
///
/// DCT/DST are the orthonormal type-II transforms (fast path via FFTW),
/// DWT is a periodized orthogonal filter-bank wavelet transform. The 2-D
/// form is the tensor product: the 1-D transform applied along every row
/// and then every column of the nx-by-ny grid (row-major flattening).
///
/// Instances are immutable after construction and safe to share between
/// threads.
class SpectralTransform {
 public:
  static SpectralTransform identity(int n);
  static SpectralTransform dct(int n);
  static SpectralTransform dst(int n);
  /// levels < 0 means full depth log2(n); n must be a power of two.
  static SpectralTransform dwt(int n, int levels = -1,
                               Wavelet family = Wavelet::Coiflet2);
  /// 2-D tensor product on an nx-by-ny grid, flattened row-major
  /// (index = ix*ny + iy).
  static SpectralTransform tensor2d(TransformKind kind, int nx, int ny,
                                    int levels = -1,
                                    Wavelet family = Wavelet::Coiflet2);

  TransformKind kind() const { return kind_; }
  Layout layout() const { return layout_; }
  int length() const { return nx_ * ny_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int levels() const { return levels_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& v) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd& w) const;
  Eigen::MatrixXd forward_ensemble(const Eigen::MatrixXd& e) const;
  Eigen::MatrixXd inverse_ensemble(const Eigen::MatrixXd& e) const;

  /// Materializes F so that dense_matrix()*v == forward(v). Test oracle;
  /// guarded against accidental huge allocations (n <= 4096).
  Eigen::MatrixXd dense_matrix() const;

 private:
  SpectralTransform(TransformKind kind, Layout layout, int nx, int ny,
                    int levels, Wavelet family);

  void apply_1d(double* data, int n, bool forward) const;
  void apply(Eigen::VectorXd& v, bool forward) const;

  TransformKind kind_;
  Layout layout_;
  int nx_;
  int ny_;
  int levels_;  // DWT only; per-axis for 2-D
  Wavelet family_;
  std::vector<double> lowpass_;  // DWT decomposition filter

  struct FftwPlans;
  std::shared_ptr<FftwPlans> plans_;  // DCT/DST fast path
};

/// Block-diagonal transform: the same per-variable transform applied
/// independently to each of the m contiguous length-n blocks of a
/// length n*m vector.
class BlockTransform {
 public:
  BlockTransform(SpectralTransform per_variable, int variable_count);

  const SpectralTransform& per_variable() const { return per_variable_; }
  int variable_count() const { return m_; }
  int length() const { return m_ * per_variable_.length(); }

  Eigen::VectorXd forward(const Eigen::VectorXd& v) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd& w) const;
  Eigen::MatrixXd forward_ensemble(const Eigen::MatrixXd& e) const;
  Eigen::MatrixXd inverse_ensemble(const Eigen::MatrixXd& e) const;
  Eigen::MatrixXd dense_matrix() const;

 private:
  SpectralTransform per_variable_;
  int m_;
};

}  // namespace sdenkf
