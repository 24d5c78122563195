#include "sdenkf/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sdenkf {

using nlohmann::json;

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  const json j = json::parse(json_text);
  ExperimentConfig cfg;

  const json& jm = j.at("model");
  cfg.model_type = jm.at("type").get<std::string>();
  if (cfg.model_type == "lorenz96") {
    auto& l = cfg.lorenz;
    get_if(jm, "dimension", l.model.dimension);
    get_if(jm, "forcing", l.model.forcing);
    get_if(jm, "dt", l.model.dt);
    get_if(jm, "steps_per_cycle", l.model.steps_per_cycle);
    get_if(jm, "spinup_steps", l.spinup_steps);
    get_if(jm, "init_mean", l.init_mean);
    get_if(jm, "init_variance", l.init_variance);
  } else if (cfg.model_type == "shallow_water") {
    auto& s = cfg.shallow_water;
    get_if(jm, "nx", s.model.nx);
    get_if(jm, "ny", s.model.ny);
    get_if(jm, "dx", s.model.dx);
    get_if(jm, "dt", s.model.dt);
    get_if(jm, "gravity", s.model.gravity);
    get_if(jm, "base_height", s.model.base_height);
    get_if(jm, "bump_height", s.model.bump_height);
    get_if(jm, "bump_width", s.model.bump_width);
    get_if(jm, "background_offset_x", s.model.background_offset_x);
    get_if(jm, "background_offset_y", s.model.background_offset_y);
    get_if(jm, "spinup_seconds", s.spinup_seconds);
    get_if(jm, "relax_seconds", s.relax_seconds);
    get_if(jm, "cycle_seconds", s.cycle_seconds);
    get_if(jm, "snapshot_start_seconds", s.snapshot_start_seconds);
    get_if(jm, "snapshot_end_seconds", s.snapshot_end_seconds);
    get_if(jm, "snapshot_stride_seconds", s.snapshot_stride_seconds);
    if (jm.contains("taper")) {
      get_if(jm.at("taper"), "block_scale", s.taper.block_scale);
      get_if(jm.at("taper"), "decay", s.taper.decay);
    }
  } else {
    throw std::invalid_argument("unknown model type: " + cfg.model_type);
  }

  get_if(j, "filters", cfg.filters);
  get_if(j, "ensemble_size", cfg.ensemble_size);
  get_if(j, "cycles", cfg.cycles);
  get_if(j, "realizations", cfg.realizations);
  if (j.contains("observation")) {
    const json& jo = j.at("observation");
    get_if(jo, "scenario", cfg.observation.scenario);
    get_if(jo, "variance", cfg.observation.variance);
    get_if(jo, "observed_count", cfg.observation.observed_count);
  }
  if (j.contains("seeds")) {
    const json& js = j.at("seeds");
    get_if(js, "truth", cfg.seeds.truth);
    get_if(js, "ensemble", cfg.seeds.ensemble);
    get_if(js, "perturbations", cfg.seeds.perturbations);
  }
  get_if(j, "inflation", cfg.inflation);
  get_if(j, "shared_perturbations", cfg.shared_perturbations);
  get_if(j, "wavelet_levels", cfg.wavelet_levels);

  if (cfg.cycles < 1) throw std::invalid_argument("cycles must be >= 1");
  if (cfg.ensemble_size < 2)
    throw std::invalid_argument("ensemble_size must be >= 2");
  if (cfg.realizations < 1)
    throw std::invalid_argument("realizations must be >= 1");
  if (cfg.inflation < 1.0)
    throw std::invalid_argument("inflation must be >= 1");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json jm;
  jm["type"] = cfg.model_type;
  if (cfg.model_type == "lorenz96") {
    const auto& l = cfg.lorenz;
    jm["dimension"] = l.model.dimension;
    jm["forcing"] = l.model.forcing;
    jm["dt"] = l.model.dt;
    jm["steps_per_cycle"] = l.model.steps_per_cycle;
    jm["spinup_steps"] = l.spinup_steps;
    jm["init_mean"] = l.init_mean;
    jm["init_variance"] = l.init_variance;
  } else {
    const auto& s = cfg.shallow_water;
    jm["nx"] = s.model.nx;
    jm["ny"] = s.model.ny;
    jm["dx"] = s.model.dx;
    jm["dt"] = s.model.dt;
    jm["gravity"] = s.model.gravity;
    jm["base_height"] = s.model.base_height;
    jm["bump_height"] = s.model.bump_height;
    jm["bump_width"] = s.model.bump_width;
    jm["background_offset_x"] = s.model.background_offset_x;
    jm["background_offset_y"] = s.model.background_offset_y;
    jm["spinup_seconds"] = s.spinup_seconds;
    jm["relax_seconds"] = s.relax_seconds;
    jm["cycle_seconds"] = s.cycle_seconds;
    jm["snapshot_start_seconds"] = s.snapshot_start_seconds;
    jm["snapshot_end_seconds"] = s.snapshot_end_seconds;
    jm["snapshot_stride_seconds"] = s.snapshot_stride_seconds;
    jm["taper"] = {{"block_scale", s.taper.block_scale},
                   {"decay", s.taper.decay}};
  }
  json j;
  j["model"] = jm;
  j["filters"] = cfg.filters;
  j["ensemble_size"] = cfg.ensemble_size;
  j["cycles"] = cfg.cycles;
  j["realizations"] = cfg.realizations;
  j["observation"] = {{"scenario", cfg.observation.scenario},
                      {"variance", cfg.observation.variance},
                      {"observed_count", cfg.observation.observed_count}};
  j["seeds"] = {{"truth", cfg.seeds.truth},
                {"ensemble", cfg.seeds.ensemble},
                {"perturbations", cfg.seeds.perturbations}};
  j["inflation"] = cfg.inflation;
  j["shared_perturbations"] = cfg.shared_perturbations;
  j["wavelet_levels"] = cfg.wavelet_levels;
  return j.dump(2);
}

}  // namespace sdenkf
