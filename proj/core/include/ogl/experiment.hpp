#pragma once

#include "ogl/dissimilarity.hpp"
#include "ogl/online.hpp"
#include "ogl/prox.hpp"
#include "ogl/synth.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ogl {

/// One row of a run log.
struct ExperimentRecord {
  std::size_t k = 0;              ///< 1-based step
  double suboptimality = 0.0;     ///< ||w^(k) - w_ref||_2 against the segment reference
  double objective = 0.0;         ///< f^(k)(w^(k)) + g(v^(k)); NaN if the learner has no state
  double regret_partial = 0.0;    ///< NaN between regret evaluation points
  double wall_time_us = 0.0;      ///< time spent in the step call
};

/// Batch references, one per stationary segment.
struct ReferenceTrack {
  std::vector<std::size_t> ends;  ///< exclusive end sample of each segment
  std::vector<Vector> solutions;

  const Vector& at(std::size_t sample) const;
};

struct SolverConfig {
  std::string algo = "opadmm";
  std::string label;  ///< defaults to algo; the pg baseline is tagged as illustrative
  Hyperparams hp;     ///< tau1/tau2 left at 0 take the defaults for the problem size
  std::optional<ForgettingSchedule> schedule;  ///< defaults by stream type
};

struct ExperimentConfig {
  GraphModelSpec graph;
  StreamSpec stream;
  std::vector<SolverConfig> solvers;

  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  std::vector<double> rho_grid;
  std::vector<double> tau1_grid;
  std::vector<double> tau2_grid;

  bool metric_suboptimality = true;
  bool metric_regret = false;
  bool metric_fscore = true;
  std::size_t regret_stride = 100;
  bool record_wall_time = true;
  double fscore_threshold = 1e-4;
  double reference_tol = 1e-9;

  std::filesystem::path output_dir = "ogl_out";

  void validate() const;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

/// Batch solution on the mean instantaneous dissimilarity of `signals` (rows).
Vector reference_solution(const DegreeMap& map, const Matrix& signals, const Hyperparams& hp,
                          double tol = 1e-9);

/// The mean of instantaneous dissimilarities over the rows of `signals`.
Vector mean_dissimilarity(const DegreeMap& map, const Matrix& signals);

/// One reference per segment of the stream.
ReferenceTrack reference_track(const DegreeMap& map, const Stream& stream, const Hyperparams& hp,
                               double tol = 1e-9);

struct RunOptions {
  bool regret = false;
  std::size_t regret_stride = 1;
  bool record_wall_time = true;
};

/// Streams every row of `signals` through `learner`, logging one record per step.
std::vector<ExperimentRecord> run_learner(const DegreeMap& map, const Matrix& signals,
                                          const ReferenceTrack& reference, OnlineLearner& learner,
                                          const RunOptions& options = {});

struct RunResult {
  std::string label;
  std::string algo;
  Hyperparams hp;
  std::vector<ExperimentRecord> records;
  Vector final_estimate;
  std::optional<double> fscore;
  std::string error;  ///< empty on success
};

struct ExperimentOutcome {
  Stream stream;
  std::vector<RunResult> runs;
  std::optional<std::pair<double, double>> selected_regularizers;
  std::optional<Hyperparams> selected_solver;
};

ExperimentOutcome run_experiment(const ExperimentConfig& config);

/// Support-recovery F-measure: an estimated edge counts when it exceeds
/// rel_threshold times the largest estimated weight; a true edge is any
/// positive weight.
double support_fscore(const Vector& estimate, const Vector& truth, double rel_threshold = 1e-4);

struct RegularizerCell {
  double alpha = 0.0;
  double beta = 0.0;
  double fscore = 0.0;
  bool all_zero = false;
};

struct RegularizerSearch {
  double alpha = 0.0;
  double beta = 0.0;
  double fscore = 0.0;
  std::vector<RegularizerCell> cells;
};

/// Batch-solves every (alpha, beta) cell and keeps the best support F-score.
/// Ties go to the larger alpha, then the larger beta. Throws if every cell
/// produces an all-zero graph.
RegularizerSearch grid_search_regularizers(const DegreeMap& map, const Matrix& signals,
                                           std::span<const double> alpha_grid,
                                           std::span<const double> beta_grid, const Vector& truth,
                                           double rel_threshold = 1e-4);

struct SolverCell {
  Hyperparams hp;
  double score = 0.0;  ///< mean suboptimality over the last 10% of steps
  std::string skipped;  ///< reason when the cell violates the step-size ranges
};

struct SolverSearch {
  Hyperparams best;
  double best_score = 0.0;
  std::vector<SolverCell> cells;
};

/// Runs OPADMM for each admissible (rho, tau1, tau2) cell with fixed
/// alpha and beta; returns the cell with the lowest tail suboptimality.
SolverSearch grid_search_solver(const DegreeMap& map, const Matrix& signals,
                                std::span<const double> rho_grid, std::span<const double> tau1_grid,
                                std::span<const double> tau2_grid, const ReferenceTrack& reference,
                                double alpha, double beta, ForgettingSchedule schedule);

}  // namespace ogl
