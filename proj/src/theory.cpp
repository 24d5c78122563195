#include "sdenkf/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace sdenkf {

Spectrum::Spectrum(Eigen::VectorXd ev) : eigenvalues(std::move(ev)) {
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (!(eigenvalues(i) >= 0.0) || !std::isfinite(eigenvalues(i)))
      throw std::invalid_argument("Spectrum: eigenvalues must be >= 0");
    if (i > 0 && eigenvalues(i) > eigenvalues(i - 1))
      throw std::invalid_argument("Spectrum: eigenvalues must be nonincreasing");
  }
}

Spectrum Spectrum::power_law(double alpha, int n) {
  Eigen::VectorXd ev(n);
  for (int k = 1; k <= n; ++k) ev(k - 1) = std::pow(k, -alpha);
  return Spectrum(std::move(ev));
}

double expected_error_sample_cov(const Spectrum& s, int ensemble_size) {
  if (ensemble_size < 2)
    throw std::invalid_argument("expected_error_sample_cov: N >= 2 required");
  const auto& ev = s.eigenvalues;
  const double l1 = ev.sum();
  const double l2sq = ev.squaredNorm();
  // 2/(N-1) sum l^2 + 1/(N-1) sum_{i!=j} l_i l_j == (l1^2 + l2^2)/(N-1)
  return (l1 * l1 + l2sq) / (ensemble_size - 1);
}

double expected_error_spectral_diag(const Spectrum& s, int ensemble_size) {
  if (ensemble_size < 2)
    throw std::invalid_argument(
        "expected_error_spectral_diag: N >= 2 required");
  return 2.0 * s.eigenvalues.squaredNorm() / (ensemble_size - 1);
}

double entry_variance(const Spectrum& s, int ensemble_size, int i, int j) {
  if (ensemble_size < 2)
    throw std::invalid_argument("entry_variance: N >= 2 required");
  if (i < 1 || j < 1 || i > s.size() || j > s.size())
    throw std::invalid_argument("entry_variance: index out of range");
  const double li = s.eigenvalues(i - 1);
  const double lj = s.eigenvalues(j - 1);
  if (i == j) return 2.0 * li * li / (ensemble_size - 1);
  return li * lj / (ensemble_size - 1);
}

EntryVarianceMC monte_carlo_entry_variance(const Spectrum& s,
                                           int ensemble_size,
                                           int replications, Rng& rng) {
  if (replications < 1000)
    throw std::invalid_argument(
        "monte_carlo_entry_variance: replications >= 1000 required");
  const int n = s.size();
  const int N = ensemble_size;
  const Eigen::VectorXd root = s.eigenvalues.cwiseSqrt();
  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd m3 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd m4 = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < replications; ++r) {
    const Eigen::MatrixXd x = root.asDiagonal() * rng.normal_matrix(n, N);
    const Eigen::VectorXd mean = x.rowwise().mean();
    const Eigen::MatrixXd dev = x.colwise() - mean;
    const Eigen::MatrixXd cn = dev * dev.transpose() / (N - 1.0);
    m1 += cn;
    m2 += cn.cwiseProduct(cn);
    m3 += cn.cwiseProduct(cn).cwiseProduct(cn);
    m4 += cn.cwiseProduct(cn).cwiseProduct(cn).cwiseProduct(cn);
  }
  const double R = replications;
  m1 /= R;
  m2 /= R;
  m3 /= R;
  m4 /= R;
  EntryVarianceMC out;
  out.entry_mean = m1;
  const Eigen::MatrixXd var =
      (m2 - m1.cwiseProduct(m1)) * (R / (R - 1.0));
  out.entry_variance = var;
  // fourth central moment from raw moments
  const Eigen::MatrixXd mu4 =
      m4 - 4.0 * m3.cwiseProduct(m1) +
      6.0 * m2.cwiseProduct(m1.cwiseProduct(m1)) -
      3.0 * m1.cwiseProduct(m1).cwiseProduct(m1.cwiseProduct(m1));
  out.variance_se =
      ((mu4 - var.cwiseProduct(var)).cwiseMax(0.0) / R).cwiseSqrt();
  out.mean_se = (var / R).cwiseSqrt();
  return out;
}

FrobeniusErrorsMC monte_carlo_frobenius_errors(const Spectrum& s,
                                               int ensemble_size,
                                               int replications, Rng& rng) {
  if (replications < 1000)
    throw std::invalid_argument(
        "monte_carlo_frobenius_errors: replications >= 1000 required");
  if (s.size() > 64)
    throw std::invalid_argument(
        "monte_carlo_frobenius_errors: n <= 64 required");
  const int n = s.size();
  const int N = ensemble_size;
  const Eigen::VectorXd root = s.eigenvalues.cwiseSqrt();
  const Eigen::MatrixXd c = s.eigenvalues.asDiagonal();
  double sum_s = 0.0, sumsq_s = 0.0, sum_d = 0.0, sumsq_d = 0.0;
  for (int r = 0; r < replications; ++r) {
    const Eigen::MatrixXd x = root.asDiagonal() * rng.normal_matrix(n, N);
    const Eigen::VectorXd mean = x.rowwise().mean();
    const Eigen::MatrixXd dev = x.colwise() - mean;
    const Eigen::MatrixXd cn = dev * dev.transpose() / (N - 1.0);
    const double es = (c - cn).squaredNorm();
    const double ed =
        (s.eigenvalues - cn.diagonal()).squaredNorm();
    sum_s += es;
    sumsq_s += es * es;
    sum_d += ed;
    sumsq_d += ed * ed;
  }
  const double R = replications;
  FrobeniusErrorsMC out;
  out.sample_error_mean = sum_s / R;
  out.diagonal_error_mean = sum_d / R;
  const double var_s =
      (sumsq_s / R - out.sample_error_mean * out.sample_error_mean) *
      (R / (R - 1.0));
  const double var_d =
      (sumsq_d / R - out.diagonal_error_mean * out.diagonal_error_mean) *
      (R / (R - 1.0));
  out.sample_error_se = std::sqrt(std::max(var_s, 0.0) / R);
  out.diagonal_error_se = std::sqrt(std::max(var_d, 0.0) / R);
  return out;
}

double power_law_error_ratio(double alpha, int n, int ensemble_size) {
  if (alpha <= 1.0)
    throw std::invalid_argument("power_law_error_ratio: alpha > 1 required");
  const Spectrum s = Spectrum::power_law(alpha, n);
  return expected_error_spectral_diag(s, ensemble_size) /
         expected_error_sample_cov(s, ensemble_size);
}

}  // namespace sdenkf
