#pragma once

#include <string>

#include "sdenkf/experiment.hpp"

namespace sdenkf {

/// Writes <prefix>_rmse.tsv (deterministic, %.17g), <prefix>_meta.json
/// (resolved config) and <prefix>_timing.tsv (wall clock; not
/// deterministic, kept out of the main table on purpose).
void emit_results(const ExperimentRecord& rec, const std::string& prefix);

/// The deterministic RMSE table as a string; what _rmse.tsv contains.
std::string format_rmse_table(const ExperimentRecord& rec);

}  // namespace sdenkf
