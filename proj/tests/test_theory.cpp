#include <doctest.h>

#include "sdenkf/theory.hpp"

using namespace sdenkf;

TEST_CASE("closed forms at lambda = (1, 1), N = 2") {
  Spectrum s{(Eigen::VectorXd(2) << 1, 1).finished()};
  // sample: 2/(N-1) sum l^2 + 1/(N-1) sum_{i!=j} l_i l_j = 4 + 2
  CHECK(expected_error_sample_cov(s, 2) == doctest::Approx(6.0));
  CHECK(expected_error_spectral_diag(s, 2) == doctest::Approx(4.0));
}

TEST_CASE("entry variances at lambda = (4, 3, 2, 1), N = 10") {
  Spectrum s{(Eigen::VectorXd(4) << 4, 3, 2, 1).finished()};
  CHECK(entry_variance(s, 10, 1, 1) == doctest::Approx(2.0 * 16 / 9));
  CHECK(entry_variance(s, 10, 3, 3) == doctest::Approx(2.0 * 4 / 9));
  CHECK(entry_variance(s, 10, 1, 2) == doctest::Approx(12.0 / 9));
  CHECK(entry_variance(s, 10, 4, 2) == doctest::Approx(3.0 / 9));
}

TEST_CASE("closed forms are consistent with each other") {
  Spectrum s{(Eigen::VectorXd(3) << 5, 2, 1).finished()};
  const int ensemble_size = 7;
  double total = 0.0;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      total += entry_variance(s, ensemble_size, i, j);
  // summing every entry variance recovers the sample-covariance error
  CHECK(total == doctest::Approx(expected_error_sample_cov(s, ensemble_size)));
  double diag = 0.0;
  for (int i = 1; i <= 3; ++i) diag += entry_variance(s, ensemble_size, i, i);
  CHECK(diag ==
        doctest::Approx(expected_error_spectral_diag(s, ensemble_size)));
}

TEST_CASE("spectrum validation") {
  CHECK_THROWS_AS(Spectrum{(Eigen::VectorXd(2) << 1, 2).finished()},
                  std::invalid_argument);
  CHECK_THROWS_AS(Spectrum{(Eigen::VectorXd(2) << 1, -1).finished()},
                  std::invalid_argument);
  const Spectrum p = Spectrum::power_law(2.0, 4);
  CHECK(p.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(p.eigenvalues(3) == doctest::Approx(1.0 / 16));
}

TEST_CASE("power-law error ratio favors the diagonal") {
  for (double alpha : {1.1, 2.0, 3.0}) {
    const double ratio = power_law_error_ratio(alpha, 32, 10);
    CHECK(ratio > 0.0);
    CHECK(ratio < 1.0);
  }
  // flatter spectra spread more mass off the diagonal
  CHECK(power_law_error_ratio(1.1, 32, 10) <
        power_law_error_ratio(3.0, 32, 10));
}

TEST_CASE("monte carlo agrees with the closed forms, quick version") {
  Spectrum s{(Eigen::VectorXd(4) << 4, 3, 2, 1).finished()};
  const int ensemble_size = 8, reps = 4000;

  Rng rng_e(900);
  const EntryVarianceMC mc =
      monte_carlo_entry_variance(s, ensemble_size, reps, rng_e);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      const double expect = entry_variance(s, ensemble_size, i, j);
      const double got = mc.entry_variance(i - 1, j - 1);
      const double se = mc.variance_se(i - 1, j - 1);
      CHECK(std::abs(got - expect) < 5.0 * se);
    }
  // sample covariance is unbiased: entry means near diag(lambda)
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(mc.entry_mean(i, i) - s.eigenvalues(i)) <
          5.0 * mc.mean_se(i, i));

  Rng rng_f(901);
  const FrobeniusErrorsMC fe =
      monte_carlo_frobenius_errors(s, ensemble_size, reps, rng_f);
  CHECK(std::abs(fe.sample_error_mean -
                 expected_error_sample_cov(s, ensemble_size)) <
        5.0 * fe.sample_error_se);
  CHECK(std::abs(fe.diagonal_error_mean -
                 expected_error_spectral_diag(s, ensemble_size)) <
        5.0 * fe.diagonal_error_se);
  CHECK(fe.diagonal_error_mean < fe.sample_error_mean);
}
