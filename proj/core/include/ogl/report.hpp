#pragma once

#include "ogl/experiment.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ogl {

/// Exact CSV header of a run log.
inline constexpr const char* kRecordHeader = "k,suboptimality,objective,regret_partial,wall_time_us";

void write_records(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records(const std::filesystem::path& path);

struct RunSummary {
  std::string label;
  std::string algo;
  double final_suboptimality = 0.0;
  /// Per-step contraction factor exp(slope) of log suboptimality over the
  /// second half of the run.
  std::optional<double> convergence_rate;
  std::optional<double> convergence_r2;
  /// Exponent c of |regret(k)| ~ k^c over the logged regret points.
  std::optional<double> regret_exponent;
  std::optional<double> fscore;
  std::string error;
};

RunSummary summarize(const RunResult& run);

/// File-system safe name derived from a run label.
std::string file_stem(const std::string& label);

/// Writes <dir>/<stem>.csv per run, <dir>/summary.json and
/// <dir>/suboptimality.svg (log-scale y, one polyline per run).
std::vector<RunSummary> emit_report(const std::vector<RunResult>& runs,
                                    const std::filesystem::path& dir,
                                    const std::string& extra_json = "{}");

std::string render_svg(const std::vector<RunResult>& runs);

}  // namespace ogl
