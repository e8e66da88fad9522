// ogl: learn and track graph topologies from streaming smooth signals.
//
//   ogl generate  synthetic graph + signal stream with ground truth
//   ogl batch     batch proximal ADMM on a signal file
//   ogl online    OPADMM (or the pg baseline) over a stream
//   ogl grid      (alpha, beta) and (rho, tau1, tau2) grid searches
//   ogl report    full experiment from a JSON config
//
// All randomness derives from --seed. OGL_OUTPUT_DIR overrides the default
// output directory.

#include "ogl/experiment.hpp"
#include "ogl/io.hpp"
#include "ogl/report.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path output_dir(const std::string& flag, const fs::path& fallback) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("OGL_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return fallback;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(ogl::parse_double(item));
  }
  return out;
}

ogl::ChangePoint parse_change(const std::string& text) {
  const auto colon = text.find(':');
  ogl::ChangePoint cp;
  cp.step = std::stoull(text.substr(0, colon));
  if (colon != std::string::npos) cp.fraction = ogl::parse_double(text.substr(colon + 1));
  return cp;
}

struct GeneratorFlags {
  std::string model = "gaussian";
  std::size_t n = 20;
  std::size_t p = 1000;
  double noise = 0.01;
  double threshold = 0.8;
  double scale = 0.2;
  double edge_prob = 0.1;
  std::size_t pa_initial = 2;
  std::size_t pa_edges = 1;
  std::vector<std::string> changes;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--model", model, "gaussian | er | pa")->check(CLI::IsMember({"gaussian", "er", "pa"}));
    app->add_option("--n", n, "node count");
    app->add_option("--p", p, "stream length");
    app->add_option("--noise", noise, "additive noise variance");
    app->add_option("--threshold", threshold, "gaussian kernel threshold");
    app->add_option("--scale", scale, "gaussian kernel scale");
    app->add_option("--edge-prob", edge_prob, "ER edge probability");
    app->add_option("--pa-initial", pa_initial, "PA initial clique size");
    app->add_option("--pa-edges", pa_edges, "PA edges per new node");
    app->add_option("--change", changes, "change point STEP[:FRACTION] (repeatable)");
    app->add_option("--seed", seed, "seed for every random draw");
  }

  ogl::GraphModelSpec graph() const {
    ogl::GraphModelSpec g;
    g.model = ogl::parse_model(model);
    g.n = n;
    g.threshold = threshold;
    g.scale = scale;
    g.edge_prob = edge_prob;
    g.pa_initial = pa_initial;
    g.pa_edges = pa_edges;
    g.seed = seed;
    return g;
  }

  ogl::StreamSpec stream() const {
    ogl::StreamSpec s;
    s.p = p;
    s.noise_variance = noise;
    for (const auto& c : changes) s.change_points.push_back(parse_change(c));
    return s;
  }
};

struct HyperFlags {
  double alpha = 1.0, beta = 1.0, rho = 1.0, tau1 = 0.0, tau2 = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha, "log-barrier weight");
    app->add_option("--beta", beta, "edge squared-norm weight");
    app->add_option("--rho", rho, "augmented Lagrangian weight");
    app->add_option("--tau1", tau1, "w step (default 0.9/(rho 2(n-1)))");
    app->add_option("--tau2", tau2, "v step (default 0.9/rho)");
  }

  ogl::Hyperparams resolve(std::size_t n) const {
    ogl::Hyperparams hp = ogl::Hyperparams::defaults(n, alpha, beta, rho);
    if (tau1 > 0.0) hp.tau1 = tau1;
    if (tau2 > 0.0) hp.tau2 = tau2;
    hp.validate(n);
    return hp;
  }
};

json hp_json(const ogl::Hyperparams& hp) {
  return {{"alpha", hp.alpha}, {"beta", hp.beta}, {"rho", hp.rho}, {"tau1", hp.tau1}, {"tau2", hp.tau2}};
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

int cmd_generate(const GeneratorFlags& gen, const std::string& out_flag) {
  const fs::path dir = output_dir(out_flag, ".");
  const auto graph = gen.graph();
  const auto stream_spec = gen.stream();
  const ogl::Stream stream = ogl::generate_stream(graph, stream_spec);
  const ogl::EdgeIndexing idx(graph.n);

  ogl::write_signals(dir / "signals.csv", stream.signals);
  json segments = json::array();
  for (std::size_t s = 0; s < stream.segments.size(); ++s) {
    const auto name = "truth_segment_" + std::to_string(s) + ".csv";
    ogl::write_edge_list(dir / name, idx, stream.segments[s].truth);
    segments.push_back({{"begin", stream.segments[s].begin},
                        {"end", stream.segments[s].end},
                        {"edges", ogl::edge_count(stream.segments[s].truth)},
                        {"file", name}});
  }
  json changes = json::array();
  for (const auto& cp : stream_spec.change_points) changes.push_back({{"step", cp.step}, {"fraction", cp.fraction}});
  const json manifest = {
      {"seed", graph.seed},
      {"graph",
       {{"model", ogl::to_string(graph.model)}, {"n", graph.n}, {"threshold", graph.threshold},
        {"scale", graph.scale}, {"edge_prob", graph.edge_prob}, {"pa_initial", graph.pa_initial},
        {"pa_edges", graph.pa_edges}}},
      {"stream", {{"p", stream_spec.p}, {"noise_variance", stream_spec.noise_variance}, {"change_points", changes}}},
      {"signals", "signals.csv"},
      {"segments", segments}};
  write_json(dir / "manifest.json", manifest);
  std::cout << "wrote " << stream_spec.p << " signals on " << graph.n << " nodes ("
            << stream.segments.size() << " segment(s)) to " << dir.string() << '\n';
  return 0;
}

int cmd_batch(const std::string& signals_path, const HyperFlags& hf, double tol, int max_iter,
              const std::string& out_flag, const std::string& edges_name, const std::string& trace_name) {
  const ogl::Matrix signals = ogl::read_signals(signals_path);
  const auto n = static_cast<std::size_t>(signals.cols());
  const ogl::DegreeMap map(n);
  const ogl::Hyperparams hp = hf.resolve(n);
  const ogl::Vector z = ogl::mean_dissimilarity(map, signals);
  ogl::BatchOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  const ogl::BatchResult result = ogl::batch_solve(map, z, hp, options);

  const fs::path dir = output_dir(out_flag, ".");
  ogl::write_edge_list(dir / edges_name, map.indexing(), result.w);
  ogl::write_trace(dir / trace_name, result.trace);
  const ogl::Vector d = map.apply(result.w);
  std::cout << (result.converged ? "converged" : "NOT converged") << " after " << result.iterations
            << " iterations\n"
            << "objective " << ogl::format_double(ogl::objective(map, result.w, z, hp)) << '\n'
            << "edges " << ogl::edge_count(result.w) << " of " << map.slots() << '\n'
            << "degree min " << d.minCoeff() << " max " << d.maxCoeff() << '\n';
  return result.converged ? 0 : 2;
}

int cmd_online(const std::string& algo, const std::string& gamma, const HyperFlags& hf, std::size_t stride,
               bool no_regret, const std::string& signals_path, const std::vector<std::size_t>& change_at,
               const GeneratorFlags& gen, const std::string& out_flag, const std::string& records_name,
               bool no_timing) {
  ogl::Stream stream;
  if (!signals_path.empty()) {
    stream.signals = ogl::read_signals(signals_path);
    std::size_t begin = 0;
    std::vector<std::size_t> ends = change_at;
    ends.push_back(static_cast<std::size_t>(stream.signals.rows()));
    for (std::size_t end : ends) {
      if (end <= begin || end > static_cast<std::size_t>(stream.signals.rows())) {
        throw std::invalid_argument("--change-at values must be increasing and inside the stream");
      }
      stream.segments.push_back({begin, end, ogl::Vector()});
      begin = end;
    }
  } else {
    stream = ogl::generate_stream(gen.graph(), gen.stream());
  }
  const auto n = static_cast<std::size_t>(stream.signals.cols());
  const ogl::DegreeMap map(n);
  const ogl::Hyperparams hp = hf.resolve(n);
  const auto schedule = gamma.empty() ? (stream.segments.size() > 1 ? ogl::ForgettingSchedule::dynamic(2e-3)
                                                                    : ogl::ForgettingSchedule::stationary())
                                      : ogl::ForgettingSchedule::parse(gamma);
  const ogl::ReferenceTrack reference = ogl::reference_track(map, stream, hp);
  auto learner = ogl::make_learner(algo, hp, schedule);
  ogl::RunOptions options;
  options.regret = !no_regret;
  options.regret_stride = stride;
  options.record_wall_time = !no_timing;
  const auto records = ogl::run_learner(map, stream.signals, reference, *learner, options);

  const fs::path dir = output_dir(out_flag, ".");
  ogl::write_records(dir / records_name, records);
  ogl::write_edge_list(dir / ("estimate_" + algo + ".csv"), map.indexing(), learner->current_estimate());
  if (algo == "pg") std::cout << "pg is an illustrative baseline, not a reference reimplementation\n";
  std::cout << algo << " schedule=" << schedule.to_string() << " steps=" << records.size()
            << " suboptimality first=" << records.front().suboptimality
            << " last=" << records.back().suboptimality << '\n';
  if (options.regret) std::cout << "static regret at p: " << records.back().regret_partial << '\n';
  return 0;
}

int cmd_grid(const std::string& signals_path, const std::string& truth_path, const std::string& alphas,
             const std::string& betas, const std::string& rhos, const std::string& tau1s,
             const std::string& tau2s, const std::string& gamma, double rel_threshold, const HyperFlags& hf,
             const std::string& out_flag) {
  const ogl::Matrix signals = ogl::read_signals(signals_path);
  const auto n = static_cast<std::size_t>(signals.cols());
  const ogl::DegreeMap map(n);
  json out;
  double alpha = hf.alpha, beta = hf.beta;
  if (!alphas.empty() || !betas.empty()) {
    if (truth_path.empty()) throw std::invalid_argument("--truth is required for the (alpha, beta) search");
    const ogl::Vector truth = ogl::read_edge_list(truth_path, n);
    const auto ag = parse_list(alphas.empty() ? std::to_string(alpha) : alphas);
    const auto bg = parse_list(betas.empty() ? std::to_string(beta) : betas);
    const auto search = ogl::grid_search_regularizers(map, signals, ag, bg, truth, rel_threshold);
    alpha = search.alpha;
    beta = search.beta;
    json cells = json::array();
    for (const auto& c : search.cells) {
      cells.push_back({{"alpha", c.alpha}, {"beta", c.beta}, {"fscore", c.fscore}, {"all_zero", c.all_zero}});
    }
    out["regularizers"] = {{"alpha", alpha}, {"beta", beta}, {"fscore", search.fscore}, {"cells", cells}};
  }
  if (!rhos.empty() || !tau1s.empty() || !tau2s.empty()) {
    ogl::Stream stream;
    stream.signals = signals;
    stream.segments.push_back({0, static_cast<std::size_t>(signals.rows()), ogl::Vector()});
    const ogl::Hyperparams ref_hp = ogl::Hyperparams::defaults(n, alpha, beta);
    const ogl::ReferenceTrack reference = ogl::reference_track(map, stream, ref_hp);
    const auto schedule = gamma.empty() ? ogl::ForgettingSchedule::stationary() : ogl::ForgettingSchedule::parse(gamma);
    const auto search = ogl::grid_search_solver(map, signals, parse_list(rhos), parse_list(tau1s),
                                                parse_list(tau2s), reference, alpha, beta, schedule);
    json cells = json::array();
    for (const auto& c : search.cells) {
      json cj = hp_json(c.hp);
      if (c.skipped.empty()) {
        cj["score"] = c.score;
      } else {
        cj["skipped"] = c.skipped;
      }
      cells.push_back(cj);
    }
    out["solver"] = {{"best", hp_json(search.best)}, {"score", search.best_score}, {"cells", cells}};
  }
  if (out.empty()) throw std::invalid_argument("grid: give --alpha-grid/--beta-grid and/or --rho-grid/--tau1-grid/--tau2-grid");
  const fs::path dir = output_dir(out_flag, ".");
  write_json(dir / "grid.json", out);
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_report(const std::string& config_path, const std::string& out_flag, std::optional<std::uint64_t> seed) {
  ogl::ExperimentConfig config = ogl::load_config(config_path);
  if (seed) config.graph.seed = *seed;
  const fs::path dir = output_dir(out_flag, config.output_dir);
  const ogl::ExperimentOutcome outcome = ogl::run_experiment(config);
  json extra = {{"seed", config.graph.seed}, {"config", json::parse(ogl::config_to_json(config))}};
  if (outcome.selected_regularizers) {
    extra["selected_regularizers"] = {{"alpha", outcome.selected_regularizers->first},
                                      {"beta", outcome.selected_regularizers->second}};
  }
  if (outcome.selected_solver) extra["selected_solver"] = hp_json(*outcome.selected_solver);
  const auto summaries = ogl::emit_report(outcome.runs, dir, extra.dump());
  int status = 0;
  for (const auto& s : summaries) {
    std::cout << s.label << ": final suboptimality " << s.final_suboptimality;
    if (s.fscore) std::cout << ", fscore " << *s.fscore;
    if (s.regret_exponent) std::cout << ", regret exponent " << *s.regret_exponent;
    if (!s.error.empty()) {
      std::cout << ", ERROR " << s.error;
      status = 2;
    }
    std::cout << '\n';
  }
  std::cout << "report written to " << dir.string() << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online graph topology learning from streaming smooth signals"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "generate a synthetic graph stream");
  GeneratorFlags gen_flags;
  gen_flags.attach(generate);
  std::string gen_out;
  generate->add_option("--out-dir", gen_out, "output directory");

  auto* batch = app.add_subcommand("batch", "batch PADMM on a signal CSV");
  std::string batch_signals, batch_out, batch_edges = "edges.csv", batch_trace = "trace.csv";
  HyperFlags batch_hp;
  double batch_tol = 1e-9;
  int batch_max_iter = 100000;
  batch->add_option("--signals", batch_signals, "signal CSV (one signal per row)")->required();
  batch_hp.attach(batch);
  batch->add_option("--tol", batch_tol, "stopping tolerance");
  batch->add_option("--max-iter", batch_max_iter, "iteration cap");
  batch->add_option("--out-dir", batch_out, "output directory");
  batch->add_option("--edges", batch_edges, "learned edge list file name");
  batch->add_option("--trace", batch_trace, "residual trace file name");

  auto* online = app.add_subcommand("online", "stream signals through an online learner");
  std::string online_algo = "opadmm", online_gamma, online_signals, online_out, online_records = "records.csv";
  HyperFlags online_hp;
  std::size_t online_stride = 100;
  bool online_no_regret = false, online_no_timing = false;
  std::vector<std::size_t> online_change_at;
  GeneratorFlags online_gen;
  online->add_option("--algo", online_algo, "opadmm | pg")->check(CLI::IsMember({"opadmm", "pg"}));
  online->add_option("--gamma", online_gamma, "stationary | fixed:<value>");
  online_hp.attach(online);
  online->add_option("--regret-stride", online_stride, "evaluate static regret every k steps (and at the last step)")
      ->check(CLI::PositiveNumber);
  online->add_flag("--no-regret", online_no_regret, "skip regret evaluation");
  online->add_flag("--no-timing", online_no_timing, "write wall_time_us as 0 for byte-stable output");
  online->add_option("--signals", online_signals, "signal CSV; otherwise generate from the model flags");
  online->add_option("--change-at", online_change_at, "segment boundaries for per-segment references");
  online_gen.attach(online);
  online->add_option("--out-dir", online_out, "output directory");
  online->add_option("--records", online_records, "record CSV file name");

  auto* grid = app.add_subcommand("grid", "hyperparameter grid search");
  std::string grid_signals, grid_truth, grid_alpha, grid_beta, grid_rho, grid_tau1, grid_tau2, grid_gamma, grid_out;
  double grid_threshold = 1e-4;
  HyperFlags grid_hp;
  grid->add_option("--signals", grid_signals, "signal CSV")->required();
  grid->add_option("--truth", grid_truth, "ground-truth edge list");
  grid->add_option("--alpha-grid", grid_alpha, "comma separated alpha values");
  grid->add_option("--beta-grid", grid_beta, "comma separated beta values");
  grid->add_option("--rho-grid", grid_rho, "comma separated rho values");
  grid->add_option("--tau1-grid", grid_tau1, "comma separated tau1 values");
  grid->add_option("--tau2-grid", grid_tau2, "comma separated tau2 values");
  grid->add_option("--gamma", grid_gamma, "schedule for the solver search");
  grid->add_option("--fscore-threshold", grid_threshold, "relative edge threshold for F-score");
  grid_hp.attach(grid);
  grid->add_option("--out-dir", grid_out, "output directory");

  auto* report = app.add_subcommand("report", "run a JSON-configured experiment and emit the report");
  std::string report_config, report_out;
  std::optional<std::uint64_t> report_seed;
  report->add_option("--config", report_config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  report->add_option("--out-dir", report_out, "output directory");
  report->add_option("--seed", report_seed, "override the config seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(gen_flags, gen_out);
    if (*batch) {
      return cmd_batch(batch_signals, batch_hp, batch_tol, batch_max_iter, batch_out, batch_edges, batch_trace);
    }
    if (*online) {
      return cmd_online(online_algo, online_gamma, online_hp, online_stride, online_no_regret, online_signals,
                        online_change_at, online_gen, online_out, online_records, online_no_timing);
    }
    if (*grid) {
      return cmd_grid(grid_signals, grid_truth, grid_alpha, grid_beta, grid_rho, grid_tau1, grid_tau2,
                      grid_gamma, grid_threshold, grid_hp, grid_out);
    }
    if (*report) return cmd_report(report_config, report_out, report_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
