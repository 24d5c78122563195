#include "sdenkf/experiment.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "sdenkf/lorenz96.hpp"
#include "sdenkf/shallow_water.hpp"

namespace sdenkf {

double rmse(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  if (estimate.size() != truth.size())
    throw std::invalid_argument("rmse: length mismatch");
  return std::sqrt((estimate - truth).squaredNorm() /
                   static_cast<double>(truth.size()));
}

FilterSpec parse_filter_tag(const std::string& tag,
                            const ObservationConfig& obs) {
  FilterSpec f;
  f.name = tag;
  if (tag == "EnKF") {
    f.route = FilterSpec::Route::ClassicalEnKF;
    return f;
  }
  std::string base = tag;
  std::string suffix;
  if (tag.size() > 2 && tag[tag.size() - 2] == '-') {
    base = tag.substr(0, tag.size() - 2);
    suffix = tag.substr(tag.size() - 1);
  }
  if (base == "DCT")
    f.transform = TransformKind::DCT;
  else if (base == "DST")
    f.transform = TransformKind::DST;
  else if (base == "DWT")
    f.transform = TransformKind::DWT;
  else if (base == "Identity")
    f.transform = TransformKind::Identity;
  else
    throw std::invalid_argument("unknown filter tag: " + tag);

  const bool partial = obs.scenario == "few_points" ||
                       obs.scenario == "partial_region";
  if (suffix.empty()) {
    if (obs.scenario == "full_state")
      f.route = FilterSpec::Route::SDFullObs;
    else if (obs.scenario == "one_variable_full")
      f.route = FilterSpec::Route::SDOneVarFull;
    else
      throw std::invalid_argument(
          "filter tag " + tag + " needs an -S or -A suffix for scenario " +
          obs.scenario);
  } else if (suffix == "S") {
    if (!partial)
      throw std::invalid_argument(tag + " requires a partial-observation scenario");
    f.route = FilterSpec::Route::SDFewPoints;
  } else if (suffix == "A") {
    if (!partial)
      throw std::invalid_argument(tag + " requires a partial-observation scenario");
    f.route = FilterSpec::Route::SDAugmented;
  } else {
    throw std::invalid_argument("unknown filter tag: " + tag);
  }
  return f;
}

namespace {

struct ScenarioContext {
  int n = 0;  // per-variable grid size
  int m = 1;  // variable count
  double c = 0.0;
  std::string scenario;
  std::vector<int> region;  // observed indices of variable 1
  Eigen::MatrixXd h_dense;  // observation operator for the classical EnKF
  Eigen::MatrixXd r_dense;
  Eigen::MatrixXd h1;  // k x n, few-points route
  std::map<TransformKind, SpectralTransform> transforms;
};

ScenarioContext make_scenario_context(const ExperimentConfig& cfg,
                                      const std::vector<FilterSpec>& roster) {
  ScenarioContext sc;
  sc.scenario = cfg.observation.scenario;
  sc.c = cfg.observation.variance;
  if (sc.c <= 0.0)
    throw std::invalid_argument("observation variance must be > 0");
  const bool lorenz = cfg.model_type == "lorenz96";
  if (lorenz) {
    sc.n = cfg.lorenz.model.dimension;
    sc.m = 1;
  } else {
    sc.n = cfg.shallow_water.model.nx * cfg.shallow_water.model.ny;
    sc.m = 3;
  }
  const int n_state = sc.n * sc.m;

  if (sc.scenario == "full_state") {
    sc.h_dense = Eigen::MatrixXd::Identity(n_state, n_state);
  } else if (sc.scenario == "one_variable_full") {
    sc.h_dense = Eigen::MatrixXd::Zero(sc.n, n_state);
    sc.h_dense.leftCols(sc.n).setIdentity();
  } else if (sc.scenario == "few_points" || sc.scenario == "partial_region") {
    const int k = cfg.observation.observed_count;
    if (k < 1 || k > sc.n)
      throw std::invalid_argument("observed_count out of range");
    sc.region.resize(k);
    for (int i = 0; i < k; ++i) sc.region[i] = i;
    sc.h_dense = Eigen::MatrixXd::Zero(k, n_state);
    sc.h1 = Eigen::MatrixXd::Zero(k, sc.n);
    for (int i = 0; i < k; ++i) {
      sc.h_dense(i, sc.region[i]) = 1.0;
      sc.h1(i, sc.region[i]) = 1.0;
    }
  } else {
    throw std::invalid_argument("unknown observation scenario: " +
                                sc.scenario);
  }
  sc.r_dense = sc.c * Eigen::MatrixXd::Identity(sc.h_dense.rows(),
                                                sc.h_dense.rows());

  for (const auto& f : roster) {
    if (f.route == FilterSpec::Route::ClassicalEnKF) {
      if (n_state > kDenseSizeGuard)
        throw std::invalid_argument(
            "classical EnKF refused: state too large for dense covariance");
      continue;
    }
    if (sc.transforms.count(f.transform)) continue;
    SpectralTransform t = [&] {
      if (lorenz) {
        switch (f.transform) {
          case TransformKind::Identity:
            return SpectralTransform::identity(sc.n);
          case TransformKind::DCT:
            return SpectralTransform::dct(sc.n);
          case TransformKind::DST:
            return SpectralTransform::dst(sc.n);
          case TransformKind::DWT:
            return SpectralTransform::dwt(sc.n, cfg.wavelet_levels);
        }
      }
      return SpectralTransform::tensor2d(
          f.transform, cfg.shallow_water.model.nx, cfg.shallow_water.model.ny,
          cfg.wavelet_levels);
    }();
    sc.transforms.emplace(f.transform, std::move(t));
  }
  return sc;
}

Ensemble apply_filter(const FilterSpec& f, const Ensemble& ens,
                      const ScenarioContext& sc,
                      const Eigen::VectorXd& truth, Rng& rng,
                      double inflation) {
  const int n_members = static_cast<int>(ens.cols());
  switch (f.route) {
    case FilterSpec::Route::ClassicalEnKF: {
      const Eigen::VectorXd y = sc.h_dense * truth;
      const Eigen::MatrixXd yp =
          perturb_observations(y, sc.c, n_members, rng);
      return enkf_analysis(ens, sc.h_dense, sc.r_dense, yp, inflation);
    }
    case FilterSpec::Route::SDFullObs: {
      const Eigen::MatrixXd yp =
          perturb_observations(truth, sc.c, n_members, rng);
      return sd_analysis_full_obs(
          ens, sc.c, BlockTransform(sc.transforms.at(f.transform), sc.m), yp,
          inflation);
    }
    case FilterSpec::Route::SDOneVarFull: {
      const Eigen::VectorXd y = truth.head(sc.n);
      const Eigen::MatrixXd yp = perturb_observations(y, sc.c, n_members, rng);
      return sd_analysis_one_var_full(
          ens, sc.c, BlockTransform(sc.transforms.at(f.transform), sc.m), yp,
          inflation);
    }
    case FilterSpec::Route::SDFewPoints: {
      Eigen::VectorXd y(sc.region.size());
      for (size_t i = 0; i < sc.region.size(); ++i) y(i) = truth(sc.region[i]);
      const Eigen::MatrixXd yp = perturb_observations(y, sc.c, n_members, rng);
      return sd_analysis_few_points(
          ens, sc.h1, sc.c * Eigen::MatrixXd::Identity(sc.h1.rows(), sc.h1.rows()),
          BlockTransform(sc.transforms.at(f.transform), sc.m), yp, inflation);
    }
    case FilterSpec::Route::SDAugmented: {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(sc.n);
      for (int idx : sc.region) y(idx) = truth(idx);
      const Eigen::MatrixXd yp = perturb_observations(y, sc.c, n_members, rng);
      return sd_analysis_augmented(ens, sc.region, sc.c,
                                   sc.transforms.at(f.transform), sc.m, yp,
                                   inflation);
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<double> per_variable_rmse(const Eigen::VectorXd& estimate,
                                      const Eigen::VectorXd& truth, int m) {
  const int n = static_cast<int>(estimate.size()) / m;
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i)
    out[i] = rmse(estimate.segment(i * n, n), truth.segment(i * n, n));
  return out;
}

struct FilterState {
  FilterSpec spec;
  Ensemble ensemble;
  FilterRun run;
  bool frozen = false;  // model blew up; stop touching the ensemble
  std::vector<double> last_forecast;
  std::vector<double> last_analysis;
};

// One forecast+analysis cycle for every roster filter.
void filter_cycle(std::vector<FilterState>& fstates,
                  const ScenarioContext& sc, const Eigen::VectorXd& truth,
                  double free_aggregate_rmse, int cycle, int realization,
                  const ExperimentConfig& cfg,
                  const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>&
                      advance_state) {
  const std::uint64_t pert_seed =
      Rng::mix(cfg.seeds.perturbations, realization);
  for (size_t fi = 0; fi < fstates.size(); ++fi) {
    auto& fs = fstates[fi];
    if (!fs.frozen) {
      try {
        for (Eigen::Index j = 0; j < fs.ensemble.cols(); ++j)
          fs.ensemble.col(j) = advance_state(fs.ensemble.col(j));
      } catch (const std::runtime_error&) {
        fs.frozen = true;
        if (!fs.run.diverged) {
          fs.run.diverged = true;
          fs.run.diverged_at_cycle = cycle;
        }
      }
    }
    std::vector<double> forecast = fs.last_forecast;
    if (!fs.frozen)
      forecast = per_variable_rmse(sample_mean(fs.ensemble), truth, sc.m);
    fs.run.forecast_rmse.push_back(forecast);
    fs.last_forecast = forecast;

    double seconds = 0.0;
    std::vector<double> analysis = forecast;
    if (!fs.frozen && !fs.run.diverged) {
      const std::uint64_t stream_index =
          cfg.shared_perturbations
              ? static_cast<std::uint64_t>(cycle)
              : static_cast<std::uint64_t>(cycle) * 1009 + fi + 1;
      Rng pert_rng = Rng::substream(pert_seed, stream_index);
      const auto t0 = std::chrono::steady_clock::now();
      Ensemble analyzed =
          apply_filter(fs.spec, fs.ensemble, sc, truth, pert_rng,
                       cfg.inflation);
      seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      const bool finite = analyzed.allFinite();
      double aggregate = std::numeric_limits<double>::infinity();
      if (finite)
        aggregate = rmse(sample_mean(analyzed), truth);
      if (!finite || aggregate > 1e3 * free_aggregate_rmse) {
        fs.run.diverged = true;
        fs.run.diverged_at_cycle = cycle;
        if (!finite) fs.frozen = true;
      } else {
        fs.ensemble = std::move(analyzed);
        analysis = per_variable_rmse(sample_mean(fs.ensemble), truth, sc.m);
      }
    }
    fs.run.analysis_rmse.push_back(analysis);
    fs.run.analysis_seconds.push_back(seconds);
    fs.last_analysis = analysis;
  }
}

}  // namespace

LorenzTruth generate_lorenz_truth(const LorenzExperimentConfig& cfg,
                                  int cycles, Rng& truth_rng) {
  const int k = cfg.model.dimension;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(k, cfg.init_mean) +
                      std::sqrt(cfg.init_variance) * truth_rng.normal_vector(k);
  x = lorenz96_advance(std::move(x), cfg.model, cfg.spinup_steps);
  LorenzTruth out;
  out.truth.reserve(cycles);
  for (int c = 0; c < cycles; ++c) {
    x = lorenz96_advance(std::move(x), cfg.model, cfg.model.steps_per_cycle);
    out.truth.push_back(x);
  }
  return out;
}

LorenzInit init_lorenz_ensemble(const LorenzExperimentConfig& cfg,
                                int ensemble_size, Rng& rng) {
  const int k = cfg.model.dimension;
  LorenzInit out;
  out.ensemble.resize(k, ensemble_size);
  for (int j = 0; j < ensemble_size; ++j) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(k, cfg.init_mean) +
                        std::sqrt(cfg.init_variance) * rng.normal_vector(k);
    out.ensemble.col(j) =
        lorenz96_advance(std::move(x), cfg.model, cfg.spinup_steps);
  }
  out.free_run = lorenz96_advance(Eigen::VectorXd::Constant(k, cfg.init_mean),
                                  cfg.model, cfg.spinup_steps);
  return out;
}

ShallowWaterBackground prepare_shallow_water_background(
    const ShallowWaterExperimentConfig& cfg) {
  const auto& model = cfg.model;
  const int n_state = 3 * model.nx * model.ny;
  ShallowWaterState s =
      make_initial_conditions(model, InitialCondition::Background);
  const int total_steps = static_cast<int>(
      std::llround(std::max(cfg.snapshot_end_seconds,
                            cfg.spinup_seconds + cfg.relax_seconds) /
                   model.dt));
  const int stride_steps =
      std::max(1, static_cast<int>(std::llround(cfg.snapshot_stride_seconds /
                                                model.dt)));
  const int snap_start = static_cast<int>(
      std::llround(cfg.snapshot_start_seconds / model.dt));
  const int snap_end =
      static_cast<int>(std::llround(cfg.snapshot_end_seconds / model.dt));
  const int spinup_step =
      static_cast<int>(std::llround(cfg.spinup_seconds / model.dt));
  const int first_analysis_step = static_cast<int>(
      std::llround((cfg.spinup_seconds + cfg.relax_seconds) / model.dt));

  std::vector<Eigen::VectorXd> snapshots;
  ShallowWaterBackground out;
  bool have_spinup = false, have_first = false;
  for (int step = 0; step <= total_steps; ++step) {
    if (step >= snap_start && step <= snap_end &&
        (step - snap_start) % stride_steps == 0)
      snapshots.push_back(flatten(s));
    if (step == spinup_step) {
      out.at_spinup = s;
      have_spinup = true;
    }
    if (step == first_analysis_step) {
      out.at_first_analysis = s;
      have_first = true;
    }
    if (step < total_steps) s = shallow_water_step(s, model);
  }
  if (!have_spinup || !have_first)
    throw std::logic_error("shallow water timeline inconsistent");
  if (snapshots.size() < 2)
    throw std::invalid_argument(
        "background covariance needs at least 2 snapshots");

  Ensemble snap(n_state, snapshots.size());
  for (size_t i = 0; i < snapshots.size(); ++i) snap.col(i) = snapshots[i];
  const Eigen::VectorXd mean = sample_mean(snap);
  out.deviations =
      (snap.colwise() - mean) /
      std::sqrt(static_cast<double>(snapshots.size()) - 1.0);
  if (n_state <= kDenseSizeGuard) {
    const Eigen::MatrixXd c = sample_covariance(snap);
    out.covariance = taper_covariance(c, cfg.taper, model.nx, model.ny, 3);
  }
  return out;
}

Ensemble init_shallow_water_ensemble(const ShallowWaterExperimentConfig& cfg,
                                     const ShallowWaterBackground& bg,
                                     int ensemble_size, Rng& rng) {
  const Eigen::VectorXd base = flatten(bg.at_spinup);
  Ensemble pert =
      bg.covariance.size() > 0
          ? sample_gaussian_perturbations(bg.covariance, ensemble_size, rng)
          : Ensemble(bg.deviations *
                     rng.normal_matrix(bg.deviations.cols(), ensemble_size));
  pert.colwise() += base;
  const int relax_steps = static_cast<int>(
      std::llround(cfg.relax_seconds / cfg.model.dt));
  for (int j = 0; j < ensemble_size; ++j) {
    ShallowWaterState s = unflatten(pert.col(j), cfg.model);
    s = shallow_water_advance(std::move(s), cfg.model, relax_steps);
    pert.col(j) = flatten(s);
  }
  return pert;
}

ExperimentRecord run_twin_experiment(const ExperimentConfig& cfg) {
  std::vector<FilterSpec> roster;
  roster.reserve(cfg.filters.size());
  for (const auto& tag : cfg.filters)
    roster.push_back(parse_filter_tag(tag, cfg.observation));
  const ScenarioContext sc = make_scenario_context(cfg, roster);

  ExperimentRecord rec;
  rec.config = cfg;
  rec.variable_names = cfg.model_type == "lorenz96"
                           ? std::vector<std::string>{"x"}
                           : std::vector<std::string>{"h", "hu", "hv"};

  if (cfg.model_type == "lorenz96") {
    const auto& l = cfg.lorenz;
    for (int r = 0; r < cfg.realizations; ++r) {
      Rng truth_rng = Rng::substream(cfg.seeds.truth, r);
      const LorenzTruth truth = generate_lorenz_truth(l, cfg.cycles, truth_rng);
      Rng ens_rng = Rng::substream(cfg.seeds.ensemble, r);
      LorenzInit init = init_lorenz_ensemble(l, cfg.ensemble_size, ens_rng);

      RealizationRecord rr;
      std::vector<FilterState> fstates;
      for (const auto& f : roster) {
        FilterState fs;
        fs.spec = f;
        fs.ensemble = init.ensemble;
        fs.run.name = f.name;
        fstates.push_back(std::move(fs));
      }
      Eigen::VectorXd free_state = init.free_run;
      auto advance = [&](const Eigen::VectorXd& x) {
        return lorenz96_advance(x, l.model, l.model.steps_per_cycle);
      };
      for (int c = 0; c < cfg.cycles; ++c) {
        free_state = advance(free_state);
        const Eigen::VectorXd& xt = truth.truth[c];
        rr.free_rmse.push_back(per_variable_rmse(free_state, xt, 1));
        filter_cycle(fstates, sc, xt, rmse(free_state, xt), c, r, cfg,
                     advance);
      }
      for (auto& fs : fstates) rr.filters.push_back(std::move(fs.run));
      rec.realizations.push_back(std::move(rr));
    }
    return rec;
  }

  // shallow water: truth and background runs are deterministic, shared
  // across realizations
  const auto& sw = cfg.shallow_water;
  const ShallowWaterBackground bg = prepare_shallow_water_background(sw);
  const int relax_total_steps = static_cast<int>(
      std::llround((sw.spinup_seconds + sw.relax_seconds) / sw.model.dt));
  const int cycle_steps =
      static_cast<int>(std::llround(sw.cycle_seconds / sw.model.dt));
  ShallowWaterState truth_state =
      make_initial_conditions(sw.model, InitialCondition::Truth);
  truth_state =
      shallow_water_advance(std::move(truth_state), sw.model,
                            relax_total_steps);
  std::vector<Eigen::VectorXd> truth_by_cycle;
  {
    ShallowWaterState s = truth_state;
    for (int c = 0; c < cfg.cycles; ++c) {
      s = shallow_water_advance(std::move(s), sw.model, cycle_steps);
      truth_by_cycle.push_back(flatten(s));
    }
  }
  std::vector<Eigen::VectorXd> free_by_cycle;
  {
    ShallowWaterState s = bg.at_first_analysis;
    for (int c = 0; c < cfg.cycles; ++c) {
      s = shallow_water_advance(std::move(s), sw.model, cycle_steps);
      free_by_cycle.push_back(flatten(s));
    }
  }
  auto advance = [&](const Eigen::VectorXd& x) {
    ShallowWaterState s = unflatten(x, sw.model);
    s = shallow_water_advance(std::move(s), sw.model, cycle_steps);
    return flatten(s);
  };
  for (int r = 0; r < cfg.realizations; ++r) {
    Rng ens_rng = Rng::substream(cfg.seeds.ensemble, r);
    Ensemble ens0 =
        init_shallow_water_ensemble(sw, bg, cfg.ensemble_size, ens_rng);
    RealizationRecord rr;
    std::vector<FilterState> fstates;
    for (const auto& f : roster) {
      FilterState fs;
      fs.spec = f;
      fs.ensemble = ens0;
      fs.run.name = f.name;
      fstates.push_back(std::move(fs));
    }
    for (int c = 0; c < cfg.cycles; ++c) {
      const Eigen::VectorXd& xt = truth_by_cycle[c];
      rr.free_rmse.push_back(per_variable_rmse(free_by_cycle[c], xt, 3));
      filter_cycle(fstates, sc, xt, rmse(free_by_cycle[c], xt), c, r, cfg,
                   advance);
    }
    for (auto& fs : fstates) rr.filters.push_back(std::move(fs.run));
    rec.realizations.push_back(std::move(rr));
  }
  return rec;
}

namespace {

int filter_index(const ExperimentRecord& rec, const std::string& name) {
  if (rec.realizations.empty())
    throw std::invalid_argument("no realizations recorded");
  const auto& fs = rec.realizations.front().filters;
  for (size_t i = 0; i < fs.size(); ++i)
    if (fs[i].name == name) return static_cast<int>(i);
  throw std::invalid_argument("no such filter in record: " + name);
}

}  // namespace

std::vector<double> ExperimentRecord::mean_free_rmse(int cycle) const {
  std::vector<double> out(variable_count(), 0.0);
  for (const auto& rr : realizations)
    for (int v = 0; v < variable_count(); ++v)
      out[v] += rr.free_rmse[cycle][v];
  for (auto& x : out) x /= static_cast<double>(realizations.size());
  return out;
}

std::vector<double> ExperimentRecord::mean_forecast_rmse(
    const std::string& filter, int cycle) const {
  const int fi = filter_index(*this, filter);
  std::vector<double> out(variable_count(), 0.0);
  for (const auto& rr : realizations)
    for (int v = 0; v < variable_count(); ++v)
      out[v] += rr.filters[fi].forecast_rmse[cycle][v];
  for (auto& x : out) x /= static_cast<double>(realizations.size());
  return out;
}

std::vector<double> ExperimentRecord::mean_analysis_rmse(
    const std::string& filter, int cycle) const {
  const int fi = filter_index(*this, filter);
  std::vector<double> out(variable_count(), 0.0);
  for (const auto& rr : realizations)
    for (int v = 0; v < variable_count(); ++v)
      out[v] += rr.filters[fi].analysis_rmse[cycle][v];
  for (auto& x : out) x /= static_cast<double>(realizations.size());
  return out;
}

double ExperimentRecord::analysis_rmse_se(const std::string& filter,
                                          int cycle, int variable) const {
  const int fi = filter_index(*this, filter);
  const double n = static_cast<double>(realizations.size());
  double sum = 0.0, sumsq = 0.0;
  for (const auto& rr : realizations) {
    const double x = rr.filters[fi].analysis_rmse[cycle][variable];
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  if (realizations.size() < 2) return 0.0;
  const double var = std::max(0.0, (sumsq / n - mean * mean) * n / (n - 1.0));
  return std::sqrt(var / n);
}

int ExperimentRecord::divergence_count(const std::string& filter) const {
  const int fi = filter_index(*this, filter);
  int count = 0;
  for (const auto& rr : realizations)
    if (rr.filters[fi].diverged) ++count;
  return count;
}

}  // namespace sdenkf
