#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdenkf/ensemble_stats.hpp"
#include "sdenkf/lorenz96.hpp"
#include "sdenkf/shallow_water.hpp"
#include "sdenkf/transforms.hpp"

namespace sdenkf {

struct Seeds {
  std::uint64_t truth = 101;
  std::uint64_t ensemble = 202;
  std::uint64_t perturbations = 303;
};

struct LorenzExperimentConfig {
  Lorenz96Config model;
  double init_mean = 0.0005;
  double init_variance = 0.01;  // N(0.0005, 0.01), second moment read as variance
  int spinup_steps = 1000;      // 10 s of model time at dt = 0.01
};

struct ShallowWaterExperimentConfig {
  ShallowWaterConfig model;
  double spinup_seconds = 4.0 * 3600.0;  // perturbation time
  double relax_seconds = 3600.0;         // member relaxation before cycle 1
  double cycle_seconds = 60.0;
  double snapshot_start_seconds = 4.0 * 3600.0;
  double snapshot_end_seconds = 6.0 * 3600.0;
  double snapshot_stride_seconds = 1.0;
  TaperSpec taper;
};

struct ObservationConfig {
  // "full_state", "one_variable_full", "few_points", "partial_region"
  std::string scenario = "full_state";
  double variance = 0.04;
  int observed_count = 0;  // leading grid points of variable 1
};

struct ExperimentConfig {
  std::string model_type = "lorenz96";  // or "shallow_water"
  LorenzExperimentConfig lorenz;
  ShallowWaterExperimentConfig shallow_water;

  // Legend tags: EnKF; DCT/DST/DWT (full observation); DCT-S/DST-S/DWT-S
  // (partial observation, direct small-system update); DCT-A/DST-A/DWT-A
  // (partial observation, augmented state).
  std::vector<std::string> filters;
  int ensemble_size = 4;
  int cycles = 30;
  int realizations = 10;
  ObservationConfig observation;
  Seeds seeds;
  double inflation = 1.0;
  bool shared_perturbations = true;
  int wavelet_levels = -1;  // -1 = full depth
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace sdenkf
