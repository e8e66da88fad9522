#include "ogl/experiment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ogl {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, count) over a few worker threads. Each index
// writes only its own output slot.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += workers) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Hyperparams complete(Hyperparams hp, std::size_t n) {
  const Hyperparams d = Hyperparams::defaults(n, hp.alpha, hp.beta, hp.rho);
  if (hp.tau1 == 0.0) hp.tau1 = d.tau1;
  if (hp.tau2 == 0.0) hp.tau2 = d.tau2;
  return hp;
}

ForgettingSchedule default_schedule(const StreamSpec& stream) {
  return stream.change_points.empty() ? ForgettingSchedule::stationary()
                                      : ForgettingSchedule::dynamic(2e-3);
}

std::vector<double> get_grid(const json& grid, const char* key) {
  if (!grid.contains(key)) return {};
  return grid.at(key).get<std::vector<double>>();
}

}  // namespace

const Vector& ReferenceTrack::at(std::size_t sample) const {
  for (std::size_t s = 0; s < ends.size(); ++s) {
    if (sample < ends[s]) return solutions[s];
  }
  throw std::out_of_range("ReferenceTrack: sample past the last segment");
}

void ExperimentConfig::validate() const {
  graph.validate();
  stream.validate();
  if (solvers.empty()) throw std::invalid_argument("experiment: at least one solver is required");
  for (const SolverConfig& s : solvers) {
    if (s.algo != "opadmm" && s.algo != "pg") {
      throw std::invalid_argument("experiment: unknown algo '" + s.algo + "'");
    }
  }
  if (alpha_grid.empty() != beta_grid.empty()) {
    throw std::invalid_argument("experiment: alpha and beta grids must both be set or both empty");
  }
  const bool any_solver_grid = !rho_grid.empty() || !tau1_grid.empty() || !tau2_grid.empty();
  if (any_solver_grid && (rho_grid.empty() || tau1_grid.empty() || tau2_grid.empty())) {
    throw std::invalid_argument("experiment: rho, tau1 and tau2 grids must all be nonempty");
  }
  if (regret_stride < 1) throw std::invalid_argument("experiment: regret_stride must be >= 1");
}

ExperimentConfig parse_config(std::string_view json_text) {
  const json j = json::parse(json_text);
  ExperimentConfig c;
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  if (j.contains("graph")) {
    const json& g = j.at("graph");
    c.graph.model = parse_model(g.value("model", std::string("gaussian")));
    c.graph.n = g.value("n", c.graph.n);
    c.graph.threshold = g.value("threshold", c.graph.threshold);
    c.graph.scale = g.value("scale", c.graph.scale);
    c.graph.edge_prob = g.value("edge_prob", c.graph.edge_prob);
    c.graph.pa_initial = g.value("pa_initial", c.graph.pa_initial);
    c.graph.pa_edges = g.value("pa_edges", c.graph.pa_edges);
  }
  c.graph.seed = seed;
  if (j.contains("stream")) {
    const json& s = j.at("stream");
    c.stream.p = s.value("p", c.stream.p);
    c.stream.noise_variance = s.value("noise_variance", c.stream.noise_variance);
    for (const json& cp : s.value("change_points", json::array())) {
      c.stream.change_points.push_back({cp.at("step").get<std::size_t>(), cp.value("fraction", 0.1)});
    }
  }
  for (const json& s : j.value("solvers", json::array())) {
    SolverConfig sc;
    sc.algo = s.value("algo", sc.algo);
    sc.label = s.value("label", std::string());
    sc.hp.alpha = s.value("alpha", sc.hp.alpha);
    sc.hp.beta = s.value("beta", sc.hp.beta);
    sc.hp.rho = s.value("rho", sc.hp.rho);
    sc.hp.tau1 = s.value("tau1", 0.0);
    sc.hp.tau2 = s.value("tau2", 0.0);
    if (s.contains("gamma")) sc.schedule = ForgettingSchedule::parse(s.at("gamma").get<std::string>());
    c.solvers.push_back(sc);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    c.alpha_grid = get_grid(g, "alpha");
    c.beta_grid = get_grid(g, "beta");
    c.rho_grid = get_grid(g, "rho");
    c.tau1_grid = get_grid(g, "tau1");
    c.tau2_grid = get_grid(g, "tau2");
  }
  if (j.contains("metrics")) {
    const auto metrics = j.at("metrics").get<std::vector<std::string>>();
    auto has = [&](const char* m) { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); };
    for (const auto& m : metrics) {
      if (m != "suboptimality" && m != "regret" && m != "fscore") {
        throw std::invalid_argument("experiment: unknown metric '" + m + "'");
      }
    }
    c.metric_suboptimality = has("suboptimality");
    c.metric_regret = has("regret");
    c.metric_fscore = has("fscore");
  }
  c.regret_stride = j.value("regret_stride", c.regret_stride);
  c.record_wall_time = j.value("record_wall_time", c.record_wall_time);
  c.fscore_threshold = j.value("fscore_threshold", c.fscore_threshold);
  c.reference_tol = j.value("reference_tol", c.reference_tol);
  c.output_dir = j.value("output_dir", c.output_dir.string());
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.graph.seed;
  j["graph"] = {{"model", to_string(c.graph.model)}, {"n", c.graph.n},
                {"threshold", c.graph.threshold},    {"scale", c.graph.scale},
                {"edge_prob", c.graph.edge_prob},    {"pa_initial", c.graph.pa_initial},
                {"pa_edges", c.graph.pa_edges}};
  json cps = json::array();
  for (const auto& cp : c.stream.change_points) cps.push_back({{"step", cp.step}, {"fraction", cp.fraction}});
  j["stream"] = {{"p", c.stream.p}, {"noise_variance", c.stream.noise_variance}, {"change_points", cps}};
  json solvers = json::array();
  for (const auto& s : c.solvers) {
    json sj = {{"algo", s.algo}, {"alpha", s.hp.alpha}, {"beta", s.hp.beta}, {"rho", s.hp.rho},
               {"tau1", s.hp.tau1}, {"tau2", s.hp.tau2}};
    if (!s.label.empty()) sj["label"] = s.label;
    if (s.schedule) sj["gamma"] = s.schedule->to_string();
    solvers.push_back(sj);
  }
  j["solvers"] = solvers;
  json grid = json::object();
  if (!c.alpha_grid.empty()) grid["alpha"] = c.alpha_grid;
  if (!c.beta_grid.empty()) grid["beta"] = c.beta_grid;
  if (!c.rho_grid.empty()) grid["rho"] = c.rho_grid;
  if (!c.tau1_grid.empty()) grid["tau1"] = c.tau1_grid;
  if (!c.tau2_grid.empty()) grid["tau2"] = c.tau2_grid;
  if (!grid.empty()) j["grid"] = grid;
  json metrics = json::array();
  if (c.metric_suboptimality) metrics.push_back("suboptimality");
  if (c.metric_regret) metrics.push_back("regret");
  if (c.metric_fscore) metrics.push_back("fscore");
  j["metrics"] = metrics;
  j["regret_stride"] = c.regret_stride;
  j["record_wall_time"] = c.record_wall_time;
  j["fscore_threshold"] = c.fscore_threshold;
  j["reference_tol"] = c.reference_tol;
  j["output_dir"] = c.output_dir.string();
  return j.dump(2);
}

Vector mean_dissimilarity(const DegreeMap& map, const Matrix& signals) {
  if (signals.rows() < 1) throw std::invalid_argument("mean_dissimilarity: no signals");
  Vector z = Vector::Zero(static_cast<Eigen::Index>(map.slots()));
  for (Eigen::Index k = 0; k < signals.rows(); ++k) {
    z += instantaneous_dissimilarity(map, signals.row(k).transpose());
  }
  return z / static_cast<double>(signals.rows());
}

Vector reference_solution(const DegreeMap& map, const Matrix& signals, const Hyperparams& hp,
                          double tol) {
  BatchOptions options;
  options.tol = tol;
  options.max_iter = 1000000;
  options.keep_trace = false;
  return batch_solve(map, mean_dissimilarity(map, signals), complete(hp, map.nodes()), options).w;
}

ReferenceTrack reference_track(const DegreeMap& map, const Stream& stream, const Hyperparams& hp,
                               double tol) {
  ReferenceTrack track;
  for (const Segment& seg : stream.segments) {
    const Matrix rows = stream.signals.middleRows(static_cast<Eigen::Index>(seg.begin),
                                                  static_cast<Eigen::Index>(seg.end - seg.begin));
    track.ends.push_back(seg.end);
    track.solutions.push_back(reference_solution(map, rows, hp, tol));
  }
  return track;
}

std::vector<ExperimentRecord> run_learner(const DegreeMap& map, const Matrix& signals,
                                          const ReferenceTrack& reference, OnlineLearner& learner,
                                          const RunOptions& options) {
  if (options.regret_stride < 1) throw std::invalid_argument("run_learner: regret_stride must be >= 1");
  learner.init(map);
  std::vector<ExperimentRecord> records;
  records.reserve(static_cast<std::size_t>(signals.rows()));
  RegretLedger ledger;
  ComparatorAccumulator comparator(map.slots());
  const auto p = static_cast<std::size_t>(signals.rows());
  for (std::size_t s = 0; s < p; ++s) {
    const Vector x = signals.row(static_cast<Eigen::Index>(s)).transpose();
    const auto start = std::chrono::steady_clock::now();
    learner.step(x);
    const auto stop = std::chrono::steady_clock::now();

    ExperimentRecord rec;
    rec.k = s + 1;
    rec.suboptimality = (learner.current_estimate() - reference.at(s)).norm();
    rec.wall_time_us = options.record_wall_time
                           ? std::chrono::duration<double, std::micro>(stop - start).count()
                           : 0.0;
    rec.objective = kNaN;
    rec.regret_partial = kNaN;
    if (const OnlineSolverState* state = learner.solver_state()) {
      rec.objective = online_cost(*state);
      if (options.regret) {
        ledger.add(rec.objective);
        comparator.add(state->dissim.running());
        if (rec.k % options.regret_stride == 0 || rec.k == p) {
          rec.regret_partial = ledger.cumulative_cost() - comparator.value(map, state->hp);
        }
      }
    }
    records.push_back(rec);
  }
  return records;
}

double support_fscore(const Vector& estimate, const Vector& truth, double rel_threshold) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("support_fscore: length mismatch");
  const double cut = rel_threshold * estimate.maxCoeff();
  std::size_t tp = 0, fp = 0, fn = 0;
  for (Eigen::Index e = 0; e < truth.size(); ++e) {
    const bool est = estimate[e] > cut && estimate[e] > 0.0;
    const bool tru = truth[e] > 0.0;
    tp += est && tru;
    fp += est && !tru;
    fn += !est && tru;
  }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

RegularizerSearch grid_search_regularizers(const DegreeMap& map, const Matrix& signals,
                                           std::span<const double> alpha_grid,
                                           std::span<const double> beta_grid, const Vector& truth,
                                           double rel_threshold) {
  if (alpha_grid.empty() || beta_grid.empty()) {
    throw std::invalid_argument("grid_search_regularizers: grids must be nonempty");
  }
  const Vector z = mean_dissimilarity(map, signals);
  RegularizerSearch search;
  search.cells.resize(alpha_grid.size() * beta_grid.size());
  parallel_for(search.cells.size(), [&](std::size_t c) {
    RegularizerCell& cell = search.cells[c];
    cell.alpha = alpha_grid[c / beta_grid.size()];
    cell.beta = beta_grid[c % beta_grid.size()];
    BatchOptions options;
    options.tol = 1e-7;
    options.max_iter = 200000;
    options.keep_trace = false;
    const Vector w = batch_solve(map, z, Hyperparams::defaults(map.nodes(), cell.alpha, cell.beta), options).w;
    cell.all_zero = !(w.array() > 0.0).any();
    cell.fscore = cell.all_zero ? 0.0 : support_fscore(w, truth, rel_threshold);
  });
  bool found = false;
  for (const RegularizerCell& cell : search.cells) {
    if (cell.all_zero) continue;
    const bool better = !found || cell.fscore > search.fscore ||
                        (cell.fscore == search.fscore &&
                         (cell.alpha > search.alpha || (cell.alpha == search.alpha && cell.beta > search.beta)));
    if (better) {
      search.alpha = cell.alpha;
      search.beta = cell.beta;
      search.fscore = cell.fscore;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("grid_search_regularizers: every cell produced an empty graph");
  return search;
}

SolverSearch grid_search_solver(const DegreeMap& map, const Matrix& signals,
                                std::span<const double> rho_grid, std::span<const double> tau1_grid,
                                std::span<const double> tau2_grid, const ReferenceTrack& reference,
                                double alpha, double beta, ForgettingSchedule schedule) {
  SolverSearch search;
  for (double rho : rho_grid) {
    for (double tau1 : tau1_grid) {
      for (double tau2 : tau2_grid) {
        SolverCell cell;
        cell.hp = Hyperparams{alpha, beta, rho, tau1, tau2};
        cell.skipped = cell.hp.violation(map.nodes());
        search.cells.push_back(cell);
      }
    }
  }
  const auto p = static_cast<std::size_t>(signals.rows());
  const std::size_t tail = std::max<std::size_t>(1, p / 10);
  RunOptions options;
  options.record_wall_time = false;
  parallel_for(search.cells.size(), [&](std::size_t c) {
    SolverCell& cell = search.cells[c];
    if (!cell.skipped.empty()) return;
    OpadmmLearner learner(cell.hp, schedule);
    const auto records = run_learner(map, signals, reference, learner, options);
    double sum = 0.0;
    for (std::size_t k = p - tail; k < p; ++k) sum += records[k].suboptimality;
    cell.score = sum / static_cast<double>(tail);
  });
  bool found = false;
  for (const SolverCell& cell : search.cells) {
    if (!cell.skipped.empty()) continue;
    if (!found || cell.score < search.best_score) {
      search.best = cell.hp;
      search.best_score = cell.score;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("grid_search_solver: every cell violates the step-size ranges");
  return search;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  const DegreeMap map(config.graph.n);
  ExperimentOutcome outcome;
  outcome.stream = generate_stream(config.graph, config.stream);
  const Stream& stream = outcome.stream;

  std::vector<SolverConfig> solvers = config.solvers;
  if (!config.alpha_grid.empty()) {
    const Segment& first = stream.segments.front();
    const Matrix rows = stream.signals.middleRows(static_cast<Eigen::Index>(first.begin),
                                                  static_cast<Eigen::Index>(first.end - first.begin));
    const RegularizerSearch reg = grid_search_regularizers(map, rows, config.alpha_grid, config.beta_grid,
                                                           first.truth, config.fscore_threshold);
    outcome.selected_regularizers = std::make_pair(reg.alpha, reg.beta);
    for (SolverConfig& s : solvers) {
      s.hp.alpha = reg.alpha;
      s.hp.beta = reg.beta;
    }
  }

  std::map<std::pair<double, double>, ReferenceTrack> references;
  auto reference_for = [&](const Hyperparams& hp) -> const ReferenceTrack& {
    const auto key = std::make_pair(hp.alpha, hp.beta);
    auto it = references.find(key);
    if (it == references.end()) {
      it = references.emplace(key, reference_track(map, stream, hp, config.reference_tol)).first;
    }
    return it->second;
  };

  if (!config.rho_grid.empty()) {
    for (SolverConfig& s : solvers) {
      if (s.algo != "opadmm") continue;
      const ForgettingSchedule schedule = s.schedule.value_or(default_schedule(config.stream));
      const SolverSearch found =
          grid_search_solver(map, stream.signals, config.rho_grid, config.tau1_grid, config.tau2_grid,
                             reference_for(s.hp), s.hp.alpha, s.hp.beta, schedule);
      s.hp = found.best;
      outcome.selected_solver = found.best;
    }
  }

  RunOptions options;
  options.regret = config.metric_regret;
  options.regret_stride = config.regret_stride;
  options.record_wall_time = config.record_wall_time;
  for (const SolverConfig& s : solvers) {
    RunResult run;
    run.algo = s.algo;
    run.label = !s.label.empty() ? s.label : (s.algo == "pg" ? "pg (illustrative baseline)" : s.algo);
    try {
      run.hp = complete(s.hp, map.nodes());
      auto learner = make_learner(s.algo, run.hp, s.schedule.value_or(default_schedule(config.stream)));
      run.records = run_learner(map, stream.signals, reference_for(run.hp), *learner, options);
      run.final_estimate = learner->current_estimate();
      if (config.metric_fscore) {
        run.fscore = support_fscore(run.final_estimate, stream.segments.back().truth, config.fscore_threshold);
      }
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    outcome.runs.push_back(std::move(run));
  }
  return outcome;
}

}  // namespace ogl
