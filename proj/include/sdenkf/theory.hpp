#pragma once

#include <Eigen/Core>

#include "sdenkf/rng.hpp"

namespace sdenkf {

/// Nonincreasing nonnegative eigenvalue sequence of a covariance.
struct Spectrum {
  Eigen::VectorXd eigenvalues;

  explicit Spectrum(Eigen::VectorXd ev);
  static Spectrum power_law(double alpha, int n);
  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Expected squared Frobenius error of the sample covariance:
/// 2/(N-1) sum lambda_i^2 + 1/(N-1) sum_{i != j} lambda_i lambda_j.
double expected_error_sample_cov(const Spectrum& s, int ensemble_size);

/// Expected squared Frobenius error of the spectral diagonal:
/// 2/(N-1) sum lambda_i^2.
double expected_error_spectral_diag(const Spectrum& s, int ensemble_size);

/// Variance of one entry of the spectral sample covariance:
/// 2 lambda_i^2/(N-1) on the diagonal, lambda_i lambda_j/(N-1) off it.
/// Indices are 1-based.
double entry_variance(const Spectrum& s, int ensemble_size, int i, int j);

struct EntryVarianceMC {
  Eigen::MatrixXd entry_mean;      // empirical mean of each entry
  Eigen::MatrixXd entry_variance;  // empirical variance of each entry
  Eigen::MatrixXd variance_se;     // standard error of the variance estimate
  Eigen::MatrixXd mean_se;         // standard error of the mean estimate
};

/// Draws ensembles of size N from N(0, diag(lambda)), computes the sample
/// covariance per replication, and returns empirical per-entry statistics.
EntryVarianceMC monte_carlo_entry_variance(const Spectrum& s,
                                           int ensemble_size,
                                           int replications, Rng& rng);

struct FrobeniusErrorsMC {
  double sample_error_mean;    // mean ||C - C^N||_F^2
  double sample_error_se;
  double diagonal_error_mean;  // mean ||C - D^N||_F^2
  double diagonal_error_se;
};

/// Monte Carlo estimate of both expected squared Frobenius errors, run in
/// the eigenbasis (C = diag(lambda), F = I).
FrobeniusErrorsMC monte_carlo_frobenius_errors(const Spectrum& s,
                                               int ensemble_size,
                                               int replications, Rng& rng);

/// Ratio of the diagonal to the sample expected error for
/// lambda_k = k^{-alpha}; in (0, 1], equal to 1 only for n = 1.
double power_law_error_ratio(double alpha, int n, int ensemble_size);

}  // namespace sdenkf
