#include "sdenkf/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace sdenkf {

namespace {

constexpr int kFewPointsGuard = 512;

Eigen::MatrixXd spd_cholesky_root(const Eigen::MatrixXd& r) {
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (r + r.transpose()));
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("noise covariance is not SPD");
  return llt.matrixL();
}

// Per-variable cross diagonals against block 0 of a spectral ensemble.
std::vector<Eigen::VectorXd> cross_diagonals_vs_first(
    const Ensemble& e_spectral, int m) {
  const int n = static_cast<int>(e_spectral.rows()) / m;
  const double denom = static_cast<double>(e_spectral.cols() - 1);
  const Eigen::MatrixXd dev =
      e_spectral.colwise() - sample_mean(e_spectral).eval();
  std::vector<Eigen::VectorXd> out(m);
  const auto dev0 = dev.topRows(n);
  for (int i = 0; i < m; ++i)
    out[i] = (dev.middleRows(i * n, n).array() * dev0.array())
                 .rowwise()
                 .sum() /
             denom;
  return out;
}

}  // namespace

ObservationSpec ObservationSpec::full_state(Eigen::VectorXd y, double c) {
  if (c <= 0.0) throw std::invalid_argument("noise variance c must be > 0");
  ObservationSpec o;
  o.scenario = Scenario::FullStateIdentity;
  o.data = std::move(y);
  o.noise_variance = c;
  return o;
}

ObservationSpec ObservationSpec::one_variable_full(Eigen::VectorXd y,
                                                   double c) {
  if (c <= 0.0) throw std::invalid_argument("noise variance c must be > 0");
  ObservationSpec o;
  o.scenario = Scenario::OneVariableFull;
  o.data = std::move(y);
  o.noise_variance = c;
  return o;
}

ObservationSpec ObservationSpec::few_points(Eigen::MatrixXd h1,
                                            Eigen::MatrixXd r,
                                            Eigen::VectorXd y) {
  if (h1.rows() > kFewPointsGuard)
    throw std::invalid_argument("few_points: k > 512 guard tripped");
  if (r.rows() != h1.rows() || r.cols() != h1.rows() ||
      y.size() != h1.rows())
    throw std::invalid_argument("few_points: dimension mismatch");
  ObservationSpec o;
  o.scenario = Scenario::FewPoints;
  o.selection = std::move(h1);
  o.noise_cov = std::move(r);
  o.data = std::move(y);
  return o;
}

ObservationSpec ObservationSpec::partial_region(std::vector<int> m,
                                                Eigen::VectorXd padded_y,
                                                double c) {
  if (m.empty()) throw std::invalid_argument("partial_region: empty M");
  if (c <= 0.0) throw std::invalid_argument("noise variance c must be > 0");
  for (int idx : m)
    if (idx < 0 || idx >= padded_y.size())
      throw std::invalid_argument("partial_region: index out of range");
  ObservationSpec o;
  o.scenario = Scenario::PartialRegion;
  o.region = std::move(m);
  o.data = std::move(padded_y);
  o.noise_variance = c;
  return o;
}

int ObservationSpec::physical_dim() const {
  switch (scenario) {
    case Scenario::FullStateIdentity:
    case Scenario::OneVariableFull:
      return static_cast<int>(data.size());
    case Scenario::FewPoints:
      return static_cast<int>(selection.rows());
    case Scenario::PartialRegion:
      return static_cast<int>(region.size());
  }
  return 0;
}

Eigen::MatrixXd ObservationSpec::dense_H(int n_state) const {
  const int k = physical_dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, n_state);
  switch (scenario) {
    case Scenario::FullStateIdentity:
      h.setIdentity();
      break;
    case Scenario::OneVariableFull:
      h.leftCols(k).setIdentity();
      break;
    case Scenario::FewPoints:
      h.leftCols(selection.cols()) = selection;
      break;
    case Scenario::PartialRegion:
      for (int r = 0; r < k; ++r) h(r, region[r]) = 1.0;
      break;
  }
  return h;
}

Eigen::MatrixXd ObservationSpec::dense_R() const {
  if (scenario == Scenario::FewPoints) return noise_cov;
  const int k = physical_dim();
  return noise_variance * Eigen::MatrixXd::Identity(k, k);
}

Eigen::VectorXd ObservationSpec::dense_y() const {
  if (scenario != Scenario::PartialRegion) return data;
  Eigen::VectorXd y(region.size());
  for (size_t r = 0; r < region.size(); ++r) y(r) = data(region[r]);
  return y;
}

Eigen::MatrixXd perturb_observations(const Eigen::VectorXd& y, double c,
                                     int N, Rng& rng) {
  if (c <= 0.0) throw std::invalid_argument("noise variance c must be > 0");
  Eigen::MatrixXd out = std::sqrt(c) * rng.normal_matrix(y.size(), N);
  out.colwise() += y;
  return out;
}

Eigen::MatrixXd perturb_observations(const Eigen::VectorXd& y,
                                     const Eigen::MatrixXd& r, int N,
                                     Rng& rng) {
  const Eigen::MatrixXd root = spd_cholesky_root(r);
  Eigen::MatrixXd out = root * rng.normal_matrix(y.size(), N);
  out.colwise() += y;
  return out;
}

Eigen::MatrixXd perturbed_data(const ObservationSpec& obs, int N, Rng& rng) {
  switch (obs.scenario) {
    case ObservationSpec::Scenario::FewPoints:
      return perturb_observations(obs.data, obs.noise_cov, N, rng);
    case ObservationSpec::Scenario::PartialRegion:
      // padded data; every entry perturbed with variance c
      return perturb_observations(obs.data, obs.noise_variance, N, rng);
    default:
      return perturb_observations(obs.data, obs.noise_variance, N, rng);
  }
}

Ensemble apply_inflation(const Ensemble& e, double inflation) {
  if (inflation < 1.0)
    throw std::invalid_argument("inflation must be >= 1");
  if (inflation == 1.0) return e;
  const Eigen::VectorXd mean = sample_mean(e);
  return (inflation * (e.colwise() - mean)).colwise() + mean;
}

Ensemble enkf_analysis(const Ensemble& e, const Eigen::MatrixXd& h,
                       const Eigen::MatrixXd& r,
                       const Eigen::MatrixXd& perturbed_y, double inflation) {
  if (h.cols() != e.rows() || perturbed_y.rows() != h.rows() ||
      perturbed_y.cols() != e.cols())
    throw std::invalid_argument("enkf_analysis: dimension mismatch");
  const Ensemble x = apply_inflation(e, inflation);
  const Eigen::MatrixXd c = sample_covariance(x);
  const Eigen::MatrixXd cht = c * h.transpose();
  const Eigen::MatrixXd s = h * cht + r;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (s + s.transpose()));
  const Eigen::MatrixXd innov = h * x - perturbed_y;
  return x - cht * ldlt.solve(innov);
}

Ensemble sd_analysis_full_obs(const Ensemble& e, double c,
                              const BlockTransform& f,
                              const Eigen::MatrixXd& perturbed_y,
                              double inflation) {
  if (f.length() != e.rows() || perturbed_y.rows() != e.rows() ||
      perturbed_y.cols() != e.cols())
    throw std::invalid_argument("sd_analysis_full_obs: dimension mismatch");
  const int m = f.variable_count();
  const int n = f.per_variable().length();
  const Ensemble x = apply_inflation(e, inflation);
  Ensemble ef = f.forward_ensemble(x);
  const Ensemble yf = f.forward_ensemble(perturbed_y);
  if (m == 1) {
    const Eigen::VectorXd d = spectral_diagonal(ef);
    const Eigen::VectorXd gain = d.array() / (d.array() + c);
    for (Eigen::Index j = 0; j < ef.cols(); ++j)
      ef.col(j) -= gain.cwiseProduct(ef.col(j) - yf.col(j));
    return f.inverse_ensemble(ef);
  }
  // per-mode m-by-m cross-variable blocks; one tiny solve per mode
  const CrossDiagonalBlocks cd = cross_diagonals(ef, m);
  const Ensemble innov = ef - yf;
  Eigen::MatrixXd a(m, m);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = cd.block(i, j)(k);
    Eigen::MatrixXd s = a;
    s.diagonal().array() += c;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
    for (Eigen::Index col = 0; col < ef.cols(); ++col) {
      Eigen::VectorXd v(m);
      for (int i = 0; i < m; ++i) v(i) = innov(i * n + k, col);
      const Eigen::VectorXd u = a * ldlt.solve(v);
      for (int i = 0; i < m; ++i) ef(i * n + k, col) -= u(i);
    }
  }
  return f.inverse_ensemble(ef);
}

Ensemble sd_analysis_full_obs(const Ensemble& e, double c,
                              const SpectralTransform& f,
                              const Eigen::MatrixXd& perturbed_y,
                              double inflation) {
  return sd_analysis_full_obs(e, c, BlockTransform(f, 1), perturbed_y,
                              inflation);
}

Ensemble sd_analysis_one_var_full(const Ensemble& e, double c,
                                  const BlockTransform& f,
                                  const Eigen::MatrixXd& perturbed_y,
                                  double inflation) {
  const int m = f.variable_count();
  const int n = f.per_variable().length();
  if (f.length() != e.rows() || perturbed_y.rows() != n ||
      perturbed_y.cols() != e.cols())
    throw std::invalid_argument(
        "sd_analysis_one_var_full: dimension mismatch");
  const Ensemble x = apply_inflation(e, inflation);
  Ensemble ef = f.forward_ensemble(x);
  const auto d = cross_diagonals_vs_first(ef, m);
  const Eigen::MatrixXd yf = f.per_variable().forward_ensemble(perturbed_y);
  const Eigen::VectorXd denom = d[0].array() + c;
  for (Eigen::Index j = 0; j < ef.cols(); ++j) {
    const Eigen::VectorXd z =
        (ef.col(j).head(n) - yf.col(j)).cwiseQuotient(denom);
    for (int i = 0; i < m; ++i)
      ef.col(j).segment(i * n, n) -= d[i].cwiseProduct(z);
  }
  return f.inverse_ensemble(ef);
}

Ensemble sd_analysis_few_points(const Ensemble& e, const Eigen::MatrixXd& h1,
                                const Eigen::MatrixXd& r,
                                const BlockTransform& f,
                                const Eigen::MatrixXd& perturbed_y,
                                double inflation) {
  const int m = f.variable_count();
  const int n = f.per_variable().length();
  const int k = static_cast<int>(h1.rows());
  if (k > kFewPointsGuard)
    throw std::invalid_argument("sd_analysis_few_points: k > 512 guard");
  if (f.length() != e.rows() || h1.cols() != n || r.rows() != k ||
      r.cols() != k || perturbed_y.rows() != k ||
      perturbed_y.cols() != e.cols())
    throw std::invalid_argument("sd_analysis_few_points: dimension mismatch");
  const Ensemble x = apply_inflation(e, inflation);
  Ensemble ef = f.forward_ensemble(x);
  const auto d = cross_diagonals_vs_first(ef, m);
  // W = F~ H1^T, one transform application per data point
  Eigen::MatrixXd w(n, k);
  for (int p = 0; p < k; ++p)
    w.col(p) = f.per_variable().forward(h1.row(p).transpose());
  Eigen::MatrixXd s = w.transpose() * d[0].asDiagonal() * w + r;
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (s + s.transpose()));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sd_analysis_few_points: k x k system not SPD");
  for (Eigen::Index j = 0; j < ef.cols(); ++j) {
    const Eigen::VectorXd resid =
        h1 * x.col(j).head(n) - perturbed_y.col(j);
    const Eigen::VectorXd u = w * llt.solve(resid);
    for (int i = 0; i < m; ++i)
      ef.col(j).segment(i * n, n) -= d[i].cwiseProduct(u);
  }
  return f.inverse_ensemble(ef);
}

Ensemble sd_analysis_augmented(const Ensemble& e,
                               const std::vector<int>& region, double c,
                               const SpectralTransform& per_variable, int m,
                               const Eigen::MatrixXd& perturbed_y,
                               double inflation) {
  if (region.empty())
    throw std::invalid_argument("sd_analysis_augmented: empty M");
  const int n = per_variable.length();
  if (e.rows() != static_cast<Eigen::Index>(m) * n ||
      perturbed_y.rows() != n || perturbed_y.cols() != e.cols())
    throw std::invalid_argument("sd_analysis_augmented: dimension mismatch");
  // X0 = X1 on M, 0 off M
  Ensemble aug(static_cast<Eigen::Index>(m + 1) * n, e.cols());
  aug.topRows(n).setZero();
  for (int idx : region) aug.row(idx) = e.row(idx);
  aug.bottomRows(e.rows()) = e;
  const BlockTransform f(per_variable, m + 1);
  const Ensemble aug_a =
      sd_analysis_one_var_full(aug, c, f, perturbed_y, inflation);
  return aug_a.bottomRows(e.rows());
}

Ensemble sd_analysis_dense_reference(const Ensemble& e,
                                     const Eigen::MatrixXd& h,
                                     const Eigen::MatrixXd& r,
                                     const BlockTransform& f,
                                     const Eigen::MatrixXd& perturbed_y,
                                     double inflation) {
  const int m = f.variable_count();
  const int n = f.per_variable().length();
  const int n_state = f.length();
  if (n_state > kDenseSizeGuard)
    throw std::invalid_argument("sd_analysis_dense_reference: size guard");
  if (e.rows() != n_state || h.cols() != n_state ||
      perturbed_y.rows() != h.rows() || perturbed_y.cols() != e.cols())
    throw std::invalid_argument(
        "sd_analysis_dense_reference: dimension mismatch");
  const Ensemble x = apply_inflation(e, inflation);
  const Ensemble ef = f.forward_ensemble(x);
  const CrossDiagonalBlocks cd = cross_diagonals(ef, m);
  Eigen::MatrixXd df = Eigen::MatrixXd::Zero(n_state, n_state);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      df.block(i * n, j * n, n, n).diagonal() = cd.block(i, j);
  const Eigen::MatrixXd fd = f.dense_matrix();
  const Eigen::MatrixXd d = fd.transpose() * df * fd;
  const Eigen::MatrixXd dht = d * h.transpose();
  const Eigen::MatrixXd s = h * dht + r;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (s + s.transpose()));
  const Eigen::MatrixXd innov = h * x - perturbed_y;
  return x - dht * ldlt.solve(innov);
}

}  // namespace sdenkf
