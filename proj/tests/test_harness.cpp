#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdenkf/experiment.hpp"
#include "sdenkf/results.hpp"

using namespace sdenkf;

namespace {

ExperimentConfig tiny_lorenz() {
  ExperimentConfig cfg;
  cfg.model_type = "lorenz96";
  cfg.lorenz.model.dimension = 16;
  cfg.lorenz.spinup_steps = 100;
  cfg.filters = {"EnKF", "DCT", "DWT"};
  cfg.ensemble_size = 4;
  cfg.cycles = 3;
  cfg.realizations = 2;
  cfg.observation.scenario = "full_state";
  return cfg;
}

}  // namespace

TEST_CASE("rmse by hand") {
  Eigen::VectorXd a(2), b(2);
  a << 1, 2;
  b << 4, 6;
  // errors 3 and 4: sqrt((9 + 16)/2)
  CHECK(rmse(a, b) == doctest::Approx(std::sqrt(12.5)));
  CHECK_THROWS_AS(rmse(a, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("filter tag parsing") {
  ObservationConfig full;
  full.scenario = "full_state";
  CHECK(parse_filter_tag("EnKF", full).route ==
        FilterSpec::Route::ClassicalEnKF);
  CHECK(parse_filter_tag("DCT", full).route == FilterSpec::Route::SDFullObs);
  CHECK(parse_filter_tag("DWT", full).transform == TransformKind::DWT);

  ObservationConfig one;
  one.scenario = "one_variable_full";
  CHECK(parse_filter_tag("DST", one).route ==
        FilterSpec::Route::SDOneVarFull);

  ObservationConfig part;
  part.scenario = "few_points";
  part.observed_count = 4;
  CHECK(parse_filter_tag("DCT-S", part).route ==
        FilterSpec::Route::SDFewPoints);
  CHECK(parse_filter_tag("DWT-A", part).route ==
        FilterSpec::Route::SDAugmented);
  CHECK_THROWS_AS(parse_filter_tag("DCT", part), std::invalid_argument);
  CHECK_THROWS_AS(parse_filter_tag("DCT-S", full), std::invalid_argument);
  CHECK_THROWS_AS(parse_filter_tag("FFT", full), std::invalid_argument);
}

TEST_CASE("config json round trip") {
  ExperimentConfig cfg = tiny_lorenz();
  cfg.observation.variance = 0.25;
  cfg.seeds.truth = 7;
  cfg.inflation = 1.05;
  const ExperimentConfig back = parse_config(config_to_json(cfg));
  CHECK(back.model_type == cfg.model_type);
  CHECK(back.lorenz.model.dimension == 16);
  CHECK(back.filters == cfg.filters);
  CHECK(back.observation.variance == doctest::Approx(0.25));
  CHECK(back.seeds.truth == 7);
  CHECK(back.inflation == doctest::Approx(1.05));
  CHECK_THROWS_AS(parse_config("{\"model\": {\"type\": \"nope\"}}"),
                  std::invalid_argument);
}

TEST_CASE("truth generation is deterministic in the seed") {
  LorenzExperimentConfig cfg;
  cfg.model.dimension = 16;
  cfg.spinup_steps = 50;
  Rng a(5), b(5), c(6);
  const LorenzTruth ta = generate_lorenz_truth(cfg, 4, a);
  const LorenzTruth tb = generate_lorenz_truth(cfg, 4, b);
  const LorenzTruth tc = generate_lorenz_truth(cfg, 4, c);
  REQUIRE(ta.truth.size() == 4);
  CHECK((ta.truth[3] - tb.truth[3]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ta.truth[3] - tc.truth[3]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("twin experiment output table is byte-identical across reruns") {
  const ExperimentConfig cfg = tiny_lorenz();
  const std::string t1 = format_rmse_table(run_twin_experiment(cfg));
  const std::string t2 = format_rmse_table(run_twin_experiment(cfg));
  CHECK(t1 == t2);
  CHECK(t1.find("EnKF") != std::string::npos);
  CHECK(t1.find("DCT") != std::string::npos);
}

TEST_CASE("assimilation beats the free run on the tiny problem") {
  ExperimentConfig cfg = tiny_lorenz();
  cfg.cycles = 10;
  const ExperimentRecord rec = run_twin_experiment(cfg);
  const double free_end = rec.mean_free_rmse(9)[0];
  for (const auto& tag : cfg.filters)
    CHECK(rec.mean_analysis_rmse(tag, 9)[0] < free_end);
}

TEST_CASE("empty roster reports the free run") {
  ExperimentConfig cfg = tiny_lorenz();
  cfg.filters.clear();
  const ExperimentRecord rec = run_twin_experiment(cfg);
  const std::string table = format_rmse_table(rec);
  CHECK(table.find("\tfree\t") != std::string::npos);
  // analysis column equals the free-run column in every data row
  std::istringstream in(table);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cycle, name, fore, ana, freec, div;
    std::getline(row, cycle, '\t');
    std::getline(row, name, '\t');
    std::getline(row, fore, '\t');
    std::getline(row, ana, '\t');
    std::getline(row, freec, '\t');
    CHECK(ana == freec);
  }
}

TEST_CASE("emit_results writes the three files") {
  ExperimentConfig cfg = tiny_lorenz();
  cfg.realizations = 1;
  const ExperimentRecord rec = run_twin_experiment(cfg);
  const std::string prefix = "harness_test_out";
  emit_results(rec, prefix);
  for (const char* suffix : {"_rmse.tsv", "_meta.json", "_timing.tsv"}) {
    std::ifstream f(prefix + suffix);
    CHECK(f.good());
    std::remove((prefix + suffix).c_str());
  }
}

TEST_CASE("partial observation routes run end to end") {
  ExperimentConfig cfg = tiny_lorenz();
  cfg.filters = {"EnKF", "DCT-S", "DWT-A"};
  cfg.observation.scenario = "few_points";
  cfg.observation.observed_count = 8;
  cfg.ensemble_size = 6;
  const ExperimentRecord rec = run_twin_experiment(cfg);
  for (const auto& tag : cfg.filters) {
    const auto a = rec.mean_analysis_rmse(tag, cfg.cycles - 1);
    CHECK(std::isfinite(a[0]));
  }
}

TEST_CASE("shallow water harness smoke test") {
  ExperimentConfig cfg;
  cfg.model_type = "shallow_water";
  auto& sw = cfg.shallow_water;
  sw.model.nx = 8;
  sw.model.ny = 8;
  sw.model.bump_width = 4.0;
  sw.model.background_offset_x = 1.0;
  sw.spinup_seconds = 60.0;
  sw.relax_seconds = 30.0;
  sw.cycle_seconds = 30.0;
  sw.snapshot_start_seconds = 60.0;
  sw.snapshot_end_seconds = 120.0;
  sw.snapshot_stride_seconds = 1.0;
  cfg.filters = {"EnKF", "DCT"};
  cfg.ensemble_size = 5;
  cfg.cycles = 2;
  cfg.realizations = 1;
  cfg.observation.scenario = "full_state";
  cfg.observation.variance = 100.0;
  const ExperimentRecord rec = run_twin_experiment(cfg);
  REQUIRE(rec.variable_names.size() == 3);
  for (const auto& tag : cfg.filters)
    for (int v = 0; v < 3; ++v)
      CHECK(std::isfinite(rec.mean_analysis_rmse(tag, 1)[v]));
}
