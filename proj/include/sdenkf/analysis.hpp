#pragma once

#include <vector>

#include <Eigen/Core>

#include "sdenkf/ensemble_stats.hpp"
#include "sdenkf/rng.hpp"
#include "sdenkf/transforms.hpp"

namespace sdenkf {

/// One of four structured observation scenarios. "Variable 1" of the
/// multivariate scenarios is block 0 in code.
struct ObservationSpec {
  enum class Scenario {
    FullStateIdentity,  // H = I, R = cI
    OneVariableFull,    // H = [I 0 ... 0], R = cI
    FewPoints,          // H = [H1 0 ... 0], R arbitrary SPD, few rows
    PartialRegion       // variable 1 observed on an index subset M
  };

  Scenario scenario;
  Eigen::VectorXd data;          // Y; for PartialRegion padded to length n,
                                 // zeros off M
  double noise_variance = 0.0;   // c for the scalar-noise scenarios
  Eigen::MatrixXd selection;     // H1 (FewPoints only)
  Eigen::MatrixXd noise_cov;     // R (FewPoints only)
  std::vector<int> region;       // M (PartialRegion only)

  static ObservationSpec full_state(Eigen::VectorXd y, double c);
  static ObservationSpec one_variable_full(Eigen::VectorXd y, double c);
  static ObservationSpec few_points(Eigen::MatrixXd h1, Eigen::MatrixXd r,
                                    Eigen::VectorXd y);
  static ObservationSpec partial_region(std::vector<int> m,
                                        Eigen::VectorXd padded_y, double c);

  /// Explicit observation operator on the full state (selection rows over
  /// M for PartialRegion).
  Eigen::MatrixXd dense_H(int n_state) const;
  Eigen::MatrixXd dense_R() const;
  /// Data in the physical observation dimension (data(M) for
  /// PartialRegion).
  Eigen::VectorXd dense_y() const;
  int physical_dim() const;
};

/// Y^j = Y + tau^j, tau^j ~ N(0, cI) independent; one column per member.
Eigen::MatrixXd perturb_observations(const Eigen::VectorXd& y, double c, int N,
                                     Rng& rng);
/// Same with a full SPD noise covariance.
Eigen::MatrixXd perturb_observations(const Eigen::VectorXd& y,
                                     const Eigen::MatrixXd& r, int N,
                                     Rng& rng);

/// Perturbed data sized for the matching structured kernel: the padded
/// length-n data for PartialRegion (every padded entry perturbed with
/// variance c), the physical data otherwise.
Eigen::MatrixXd perturbed_data(const ObservationSpec& obs, int N, Rng& rng);

/// Multiplicative inflation of deviations about the ensemble mean.
Ensemble apply_inflation(const Ensemble& e, double inflation);

/// Classical perturbed-observation EnKF with explicit H and R; dense
/// sample covariance, reference baseline. perturbed_y has one column per
/// member (identical columns = perturbations forced to zero).
Ensemble enkf_analysis(const Ensemble& e, const Eigen::MatrixXd& h,
                       const Eigen::MatrixXd& r,
                       const Eigen::MatrixXd& perturbed_y,
                       double inflation = 1.0);

/// Spectral-diagonal update with the whole state observed, H = I,
/// R = cI; everything happens on per-mode scalars in spectral space.
Ensemble sd_analysis_full_obs(const Ensemble& e, double c,
                              const BlockTransform& f,
                              const Eigen::MatrixXd& perturbed_y,
                              double inflation = 1.0);
Ensemble sd_analysis_full_obs(const Ensemble& e, double c,
                              const SpectralTransform& f,
                              const Eigen::MatrixXd& perturbed_y,
                              double inflation = 1.0);

/// Variable 1 (block 0) fully observed with R = cI; unobserved variables
/// updated through per-mode cross-covariances. perturbed_y is n-by-N.
Ensemble sd_analysis_one_var_full(const Ensemble& e, double c,
                                  const BlockTransform& f,
                                  const Eigen::MatrixXd& perturbed_y,
                                  double inflation = 1.0);

/// Variable 1 observed at k points through H1 with arbitrary SPD R;
/// one small k-by-k solve per member. perturbed_y is k-by-N.
Ensemble sd_analysis_few_points(const Ensemble& e,
                                const Eigen::MatrixXd& h1,
                                const Eigen::MatrixXd& r,
                                const BlockTransform& f,
                                const Eigen::MatrixXd& perturbed_y,
                                double inflation = 1.0);

/// Variable 1 observed on an index subset via state augmentation: a
/// masked copy of variable 1 is appended, observed fully, then dropped.
/// perturbed_y is the padded n-by-N data.
Ensemble sd_analysis_augmented(const Ensemble& e,
                               const std::vector<int>& region, double c,
                               const SpectralTransform& per_variable, int m,
                               const Eigen::MatrixXd& perturbed_y,
                               double inflation = 1.0);

/// Literal dense evaluation of the spectral-diagonal update: materializes
/// the back-transformed diagonal approximation and applies the gain with
/// explicit H and R. Correctness oracle for the structured kernels.
Ensemble sd_analysis_dense_reference(const Ensemble& e,
                                     const Eigen::MatrixXd& h,
                                     const Eigen::MatrixXd& r,
                                     const BlockTransform& f,
                                     const Eigen::MatrixXd& perturbed_y,
                                     double inflation = 1.0);

}  // namespace sdenkf
