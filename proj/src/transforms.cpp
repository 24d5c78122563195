#include "sdenkf/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace sdenkf {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_int(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

// Coiflet family member with 12 taps (coif2), coefficients from the
// published Coiflet filter tables; orthonormality is enforced by the
// property tests.
const std::vector<double>& coif2_lowpass() {
  static const std::vector<double> h = {
      -0.0007205494453645122, -0.0018232088707029932, 0.0056114348193944995,
      0.023680171946334084,   -0.0594344186464569,    -0.0764885990783064,
      0.41700518442169254,    0.8127236354455423,     0.3861100668211622,
      -0.06737255472196302,   -0.04146493678175915,   0.016387336463522112};
  return h;
}

const std::vector<double>& db2_lowpass() {
  static const std::vector<double> h = [] {
    const double s3 = std::sqrt(3.0);
    const double c = 1.0 / (4.0 * std::sqrt(2.0));
    return std::vector<double>{c * (1.0 + s3), c * (3.0 + s3),
                               c * (3.0 - s3), c * (1.0 - s3)};
  }();
  return h;
}

std::vector<double> highpass_from_lowpass(const std::vector<double>& h) {
  const int L = static_cast<int>(h.size());
  std::vector<double> g(L);
  for (int m = 0; m < L; ++m)
    g[m] = ((m % 2 == 0) ? 1.0 : -1.0) * h[L - 1 - m];
  return g;
}

}  // namespace

// FFTW plan bundle for one 1-D size. fftw_execute is not re-entrant on
// shared buffers, so each apply locks the bundle.
struct SpectralTransform::FftwPlans {
  struct PlanSet {
    int n = 0;
    double* in = nullptr;
    double* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    std::mutex mu;

    PlanSet(int size, fftw_r2r_kind fwd_kind, fftw_r2r_kind inv_kind)
        : n(size) {
      in = fftw_alloc_real(size);
      out = fftw_alloc_real(size);
      fwd = fftw_plan_r2r_1d(size, in, out, fwd_kind, FFTW_ESTIMATE);
      inv = fftw_plan_r2r_1d(size, in, out, inv_kind, FFTW_ESTIMATE);
    }
    ~PlanSet() {
      fftw_destroy_plan(fwd);
      fftw_destroy_plan(inv);
      fftw_free(in);
      fftw_free(out);
    }
    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;
  };

  std::vector<std::unique_ptr<PlanSet>> sets;

  PlanSet& for_size(int n) {
    for (auto& s : sets)
      if (s->n == n) return *s;
    throw std::logic_error("no FFTW plan for size " + std::to_string(n));
  }
};

SpectralTransform::SpectralTransform(TransformKind kind, Layout layout, int nx,
                                     int ny, int levels, Wavelet family)
    : kind_(kind),
      layout_(layout),
      nx_(nx),
      ny_(ny),
      levels_(levels),
      family_(family) {
  if (nx_ <= 0 || ny_ <= 0)
    throw std::invalid_argument("transform length must be positive");
  if (kind_ == TransformKind::DWT) {
    for (int n : {nx_, ny_}) {
      if (n == 1 && layout_ == Layout::OneD) continue;
      if (!is_power_of_two(n))
        throw std::invalid_argument("DWT requires a power-of-two length");
    }
    const int max_levels =
        layout_ == Layout::OneD ? log2_int(nx_)
                                : std::min(log2_int(nx_), log2_int(ny_));
    if (levels_ < 0) levels_ = max_levels;
    if (levels_ > max_levels)
      throw std::invalid_argument("DWT levels exceed log2(n)");
    lowpass_ =
        family_ == Wavelet::Coiflet2 ? coif2_lowpass() : db2_lowpass();
  }
  if (kind_ == TransformKind::DCT || kind_ == TransformKind::DST) {
    const fftw_r2r_kind fk =
        kind_ == TransformKind::DCT ? FFTW_REDFT10 : FFTW_RODFT10;
    const fftw_r2r_kind ik =
        kind_ == TransformKind::DCT ? FFTW_REDFT01 : FFTW_RODFT01;
    plans_ = std::make_shared<FftwPlans>();
    plans_->sets.emplace_back(
        std::make_unique<FftwPlans::PlanSet>(layout_ == Layout::OneD ? nx_ : ny_,
                                             fk, ik));
    if (layout_ == Layout::TwoDTensor && nx_ != ny_)
      plans_->sets.emplace_back(
          std::make_unique<FftwPlans::PlanSet>(nx_, fk, ik));
  }
}

SpectralTransform SpectralTransform::identity(int n) {
  return SpectralTransform(TransformKind::Identity, Layout::OneD, n, 1, 0,
                           Wavelet::Coiflet2);
}

SpectralTransform SpectralTransform::dct(int n) {
  return SpectralTransform(TransformKind::DCT, Layout::OneD, n, 1, 0,
                           Wavelet::Coiflet2);
}

SpectralTransform SpectralTransform::dst(int n) {
  return SpectralTransform(TransformKind::DST, Layout::OneD, n, 1, 0,
                           Wavelet::Coiflet2);
}

SpectralTransform SpectralTransform::dwt(int n, int levels, Wavelet family) {
  return SpectralTransform(TransformKind::DWT, Layout::OneD, n, 1, levels,
                           family);
}

SpectralTransform SpectralTransform::tensor2d(TransformKind kind, int nx,
                                              int ny, int levels,
                                              Wavelet family) {
  return SpectralTransform(kind, Layout::TwoDTensor, nx, ny, levels, family);
}

void SpectralTransform::apply_1d(double* data, int n, bool forward) const {
  switch (kind_) {
    case TransformKind::Identity:
      return;
    case TransformKind::DCT: {
      auto& p = plans_->for_size(n);
      std::lock_guard<std::mutex> lock(p.mu);
      const double full = std::sqrt(2.0 / n);
      const double dc = std::sqrt(1.0 / n);
      if (forward) {
        for (int i = 0; i < n; ++i) p.in[i] = data[i];
        fftw_execute(p.fwd);
        data[0] = 0.5 * dc * p.out[0];
        for (int i = 1; i < n; ++i) data[i] = 0.5 * full * p.out[i];
      } else {
        p.in[0] = data[0] * dc;
        for (int i = 1; i < n; ++i) p.in[i] = data[i] * 0.5 * full;
        fftw_execute(p.inv);
        for (int i = 0; i < n; ++i) data[i] = p.out[i];
      }
      return;
    }
    case TransformKind::DST: {
      auto& p = plans_->for_size(n);
      std::lock_guard<std::mutex> lock(p.mu);
      const double full = std::sqrt(2.0 / n);
      const double last = std::sqrt(1.0 / n);
      if (forward) {
        for (int i = 0; i < n; ++i) p.in[i] = data[i];
        fftw_execute(p.fwd);
        for (int i = 0; i + 1 < n; ++i) data[i] = 0.5 * full * p.out[i];
        data[n - 1] = 0.5 * last * p.out[n - 1];
      } else {
        for (int i = 0; i + 1 < n; ++i) p.in[i] = data[i] * 0.5 * full;
        p.in[n - 1] = data[n - 1] * last;
        fftw_execute(p.inv);
        for (int i = 0; i < n; ++i) data[i] = p.out[i];
      }
      return;
    }
    case TransformKind::DWT: {
      const auto& h = lowpass_;
      const auto g = highpass_from_lowpass(h);
      const int L = static_cast<int>(h.size());
      std::vector<double> tmp(n);
      if (forward) {
        for (int level = 0; level < levels_; ++level) {
          const int len = n >> level;
          const int half = len / 2;
          for (int k = 0; k < half; ++k) {
            double a = 0.0, d = 0.0;
            for (int m = 0; m < L; ++m) {
              const double x = data[(2 * k + m) % len];
              a += h[m] * x;
              d += g[m] * x;
            }
            tmp[k] = a;
            tmp[half + k] = d;
          }
          for (int i = 0; i < len; ++i) data[i] = tmp[i];
        }
      } else {
        for (int level = levels_ - 1; level >= 0; --level) {
          const int len = n >> level;
          const int half = len / 2;
          for (int i = 0; i < len; ++i) tmp[i] = 0.0;
          for (int k = 0; k < half; ++k) {
            const double a = data[k];
            const double d = data[half + k];
            for (int m = 0; m < L; ++m)
              tmp[(2 * k + m) % len] += h[m] * a + g[m] * d;
          }
          for (int i = 0; i < len; ++i) data[i] = tmp[i];
        }
      }
      return;
    }
  }
}

void SpectralTransform::apply(Eigen::VectorXd& v, bool forward) const {
  if (layout_ == Layout::OneD) {
    apply_1d(v.data(), nx_, forward);
    return;
  }
  // row-major grid, index = ix*ny + iy: rows are contiguous length-ny
  // slices, columns stride by ny.
  std::vector<double> col(nx_);
  auto do_rows = [&] {
    for (int ix = 0; ix < nx_; ++ix) apply_1d(v.data() + ix * ny_, ny_, forward);
  };
  auto do_cols = [&] {
    for (int iy = 0; iy < ny_; ++iy) {
      for (int ix = 0; ix < nx_; ++ix) col[ix] = v(ix * ny_ + iy);
      apply_1d(col.data(), nx_, forward);
      for (int ix = 0; ix < nx_; ++ix) v(ix * ny_ + iy) = col[ix];
    }
  };
  if (forward) {
    do_rows();
    do_cols();
  } else {
    do_cols();
    do_rows();
  }
}

Eigen::VectorXd SpectralTransform::forward(const Eigen::VectorXd& v) const {
  if (v.size() != length())
    throw std::invalid_argument("forward: vector length mismatch");
  Eigen::VectorXd w = v;
  apply(w, true);
  return w;
}

Eigen::VectorXd SpectralTransform::inverse(const Eigen::VectorXd& w) const {
  if (w.size() != length())
    throw std::invalid_argument("inverse: vector length mismatch");
  Eigen::VectorXd v = w;
  apply(v, false);
  return v;
}

Eigen::MatrixXd SpectralTransform::forward_ensemble(
    const Eigen::MatrixXd& e) const {
  if (e.rows() != length())
    throw std::invalid_argument("forward_ensemble: row count mismatch");
  Eigen::MatrixXd out(e.rows(), e.cols());
  Eigen::VectorXd col(e.rows());
  for (Eigen::Index j = 0; j < e.cols(); ++j) {
    col = e.col(j);
    apply(col, true);
    out.col(j) = col;
  }
  return out;
}

Eigen::MatrixXd SpectralTransform::inverse_ensemble(
    const Eigen::MatrixXd& e) const {
  if (e.rows() != length())
    throw std::invalid_argument("inverse_ensemble: row count mismatch");
  Eigen::MatrixXd out(e.rows(), e.cols());
  Eigen::VectorXd col(e.rows());
  for (Eigen::Index j = 0; j < e.cols(); ++j) {
    col = e.col(j);
    apply(col, false);
    out.col(j) = col;
  }
  return out;
}

Eigen::MatrixXd SpectralTransform::dense_matrix() const {
  const int n = length();
  if (n > 4096)
    throw std::invalid_argument("dense_matrix: n > 4096 guard tripped");
  Eigen::MatrixXd F(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    e(j) = 1.0;
    F.col(j) = forward(e);
    e(j) = 0.0;
  }
  return F;
}

BlockTransform::BlockTransform(SpectralTransform per_variable,
                               int variable_count)
    : per_variable_(std::move(per_variable)), m_(variable_count) {
  if (m_ <= 0) throw std::invalid_argument("variable_count must be positive");
}

Eigen::VectorXd BlockTransform::forward(const Eigen::VectorXd& v) const {
  if (v.size() != length())
    throw std::invalid_argument("block forward: length mismatch");
  const int n = per_variable_.length();
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < m_; ++i)
    out.segment(i * n, n) = per_variable_.forward(v.segment(i * n, n));
  return out;
}

Eigen::VectorXd BlockTransform::inverse(const Eigen::VectorXd& w) const {
  if (w.size() != length())
    throw std::invalid_argument("block inverse: length mismatch");
  const int n = per_variable_.length();
  Eigen::VectorXd out(w.size());
  for (int i = 0; i < m_; ++i)
    out.segment(i * n, n) = per_variable_.inverse(w.segment(i * n, n));
  return out;
}

Eigen::MatrixXd BlockTransform::forward_ensemble(
    const Eigen::MatrixXd& e) const {
  if (e.rows() != length())
    throw std::invalid_argument("block forward_ensemble: row count mismatch");
  Eigen::MatrixXd out(e.rows(), e.cols());
  for (Eigen::Index j = 0; j < e.cols(); ++j) out.col(j) = forward(e.col(j));
  return out;
}

Eigen::MatrixXd BlockTransform::inverse_ensemble(
    const Eigen::MatrixXd& e) const {
  if (e.rows() != length())
    throw std::invalid_argument("block inverse_ensemble: row count mismatch");
  Eigen::MatrixXd out(e.rows(), e.cols());
  for (Eigen::Index j = 0; j < e.cols(); ++j) out.col(j) = inverse(e.col(j));
  return out;
}

Eigen::MatrixXd BlockTransform::dense_matrix() const {
  const int n = per_variable_.length();
  if (n * m_ > 4096)
    throw std::invalid_argument("dense_matrix: n > 4096 guard tripped");
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(length(), length());
  const Eigen::MatrixXd Ft = per_variable_.dense_matrix();
  for (int i = 0; i < m_; ++i) F.block(i * n, i * n, n, n) = Ft;
  return F;
}

}  // namespace sdenkf
