#include "sdenkf/results.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdenkf {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

std::string format_rmse_table(const ExperimentRecord& rec) {
  std::ostringstream out;
  out << "cycle\tfilter";
  for (const auto& v : rec.variable_names)
    out << "\tforecast_rmse_" << v << "\tanalysis_rmse_" << v;
  for (const auto& v : rec.variable_names) out << "\tfree_rmse_" << v;
  out << "\tdiverged_count\n";

  std::vector<std::string> names;
  if (!rec.realizations.empty())
    for (const auto& fr : rec.realizations.front().filters)
      names.push_back(fr.name);

  for (int c = 0; c < rec.cycles(); ++c) {
    const auto free_mean = rec.mean_free_rmse(c);
    if (names.empty()) {
      // roster empty: the free run is the only "filter"; its analysis
      // column is the free-run RMSE itself
      out << c << "\tfree";
      for (double x : free_mean) out << '\t' << g17(x) << '\t' << g17(x);
      for (double x : free_mean) out << '\t' << g17(x);
      out << "\t0\n";
      continue;
    }
    for (const auto& name : names) {
      const auto fmean = rec.mean_forecast_rmse(name, c);
      const auto amean = rec.mean_analysis_rmse(name, c);
      out << c << '\t' << name;
      for (int v = 0; v < rec.variable_count(); ++v)
        out << '\t' << g17(fmean[v]) << '\t' << g17(amean[v]);
      for (double x : free_mean) out << '\t' << g17(x);
      out << '\t' << rec.divergence_count(name) << '\n';
    }
  }
  return out.str();
}

void emit_results(const ExperimentRecord& rec, const std::string& prefix) {
  write_file(prefix + "_rmse.tsv", format_rmse_table(rec));
  write_file(prefix + "_meta.json", config_to_json(rec.config) + "\n");

  std::ostringstream timing;
  timing << "realization\tcycle\tfilter\tanalysis_seconds\n";
  for (size_t r = 0; r < rec.realizations.size(); ++r)
    for (const auto& fr : rec.realizations[r].filters)
      for (size_t c = 0; c < fr.analysis_seconds.size(); ++c)
        timing << r << '\t' << c << '\t' << fr.name << '\t'
               << g17(fr.analysis_seconds[c]) << '\n';
  write_file(prefix + "_timing.tsv", timing.str());
}

}  // namespace sdenkf
