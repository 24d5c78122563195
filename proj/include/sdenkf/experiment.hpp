#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdenkf/analysis.hpp"
#include "sdenkf/config.hpp"
#include "sdenkf/ensemble_stats.hpp"
#include "sdenkf/rng.hpp"

namespace sdenkf {

double rmse(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);

/// Resolved filter roster entry: tag -> update route + transform kind.
struct FilterSpec {
  enum class Route {
    ClassicalEnKF,
    SDFullObs,
    SDOneVarFull,
    SDFewPoints,
    SDAugmented
  };
  std::string name;
  Route route;
  TransformKind transform = TransformKind::Identity;
};

FilterSpec parse_filter_tag(const std::string& tag,
                            const ObservationConfig& obs);

struct FilterRun {
  std::string name;
  std::vector<std::vector<double>> forecast_rmse;  // [cycle][variable]
  std::vector<std::vector<double>> analysis_rmse;  // [cycle][variable]
  std::vector<double> analysis_seconds;            // wall clock per cycle
  bool diverged = false;
  int diverged_at_cycle = -1;
};

struct RealizationRecord {
  std::vector<std::vector<double>> free_rmse;  // [cycle][variable]
  std::vector<FilterRun> filters;
};

struct ExperimentRecord {
  ExperimentConfig config;
  std::vector<std::string> variable_names;  // {"x"} or {"h","hu","hv"}
  std::vector<RealizationRecord> realizations;

  int cycles() const { return config.cycles; }
  int variable_count() const {
    return static_cast<int>(variable_names.size());
  }
  std::vector<double> mean_free_rmse(int cycle) const;
  std::vector<double> mean_forecast_rmse(const std::string& filter,
                                         int cycle) const;
  std::vector<double> mean_analysis_rmse(const std::string& filter,
                                         int cycle) const;
  /// Monte Carlo standard error of the analysis RMSE mean.
  double analysis_rmse_se(const std::string& filter, int cycle,
                          int variable) const;
  int divergence_count(const std::string& filter) const;
};

/// Truth trajectory and per-cycle data for the Lorenz 96 twin experiment;
/// data = H truth, no added noise.
struct LorenzTruth {
  std::vector<Eigen::VectorXd> truth;  // state after each cycle's advance
};
LorenzTruth generate_lorenz_truth(const LorenzExperimentConfig& cfg,
                                  int cycles, Rng& truth_rng);

/// Members drawn i.i.d. componentwise from N(init_mean, init_variance)
/// and advanced through spin-up; the free run starts from the mean of the
/// initial distribution.
struct LorenzInit {
  Ensemble ensemble;
  Eigen::VectorXd free_run;
};
LorenzInit init_lorenz_ensemble(const LorenzExperimentConfig& cfg,
                                int ensemble_size, Rng& rng);

/// Deterministic shared pieces of the shallow-water twin experiment:
/// tapered background covariance from model snapshots, plus the
/// background state at perturbation time and at first analysis.
struct ShallowWaterBackground {
  /// Dense tapered B; empty above the dense-size guard, in which case
  /// draws come from the scaled snapshot deviations (untapered, low rank).
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd deviations;          // (snapshots - mean)/sqrt(S-1)
  ShallowWaterState at_spinup;         // perturbation time
  ShallowWaterState at_first_analysis;
};
ShallowWaterBackground prepare_shallow_water_background(
    const ShallowWaterExperimentConfig& cfg);

/// Background state + draws from N(0, B), each member relaxed by a model
/// advance before the first analysis. Returns flattened members.
Ensemble init_shallow_water_ensemble(const ShallowWaterExperimentConfig& cfg,
                                     const ShallowWaterBackground& bg,
                                     int ensemble_size, Rng& rng);

ExperimentRecord run_twin_experiment(const ExperimentConfig& cfg);

}  // namespace sdenkf
