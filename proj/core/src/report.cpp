#include "ogl/report.hpp"

#include "ogl/fit.hpp"
#include "ogl/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ogl {

using nlohmann::json;

void write_records(const std::filesystem::path& path, const std::vector<ExperimentRecord>& records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kRecordHeader << '\n';
  for (const ExperimentRecord& r : records) {
    out << r.k << ',' << format_double(r.suboptimality) << ',' << format_double(r.objective) << ','
        << format_double(r.regret_partial) << ',' << format_double(r.wall_time_us) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<ExperimentRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) {
    throw std::runtime_error(path.string() + ": unexpected record header");
  }
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw std::runtime_error(path.string() + ": expected 5 fields");
    ExperimentRecord r;
    r.k = static_cast<std::size_t>(std::stoull(f[0]));
    r.suboptimality = parse_double(f[1]);
    r.objective = parse_double(f[2]);
    r.regret_partial = parse_double(f[3]);
    r.wall_time_us = parse_double(f[4]);
    records.push_back(r);
  }
  return records;
}

RunSummary summarize(const RunResult& run) {
  RunSummary s;
  s.label = run.label;
  s.algo = run.algo;
  s.fscore = run.fscore;
  s.error = run.error;
  if (run.records.empty()) return s;
  s.final_suboptimality = run.records.back().suboptimality;

  std::vector<double> ks, subs;
  for (std::size_t i = run.records.size() / 2; i < run.records.size(); ++i) {
    const auto& r = run.records[i];
    if (r.suboptimality > 0.0) {
      ks.push_back(static_cast<double>(r.k));
      subs.push_back(r.suboptimality);
    }
  }
  if (ks.size() >= 2) {
    const LineFit fit = fit_log_linear(ks, subs);
    s.convergence_rate = std::exp(fit.slope);
    s.convergence_r2 = fit.r_squared;
  }

  std::vector<double> rk, rv;
  for (const auto& r : run.records) {
    if (std::isfinite(r.regret_partial) && r.regret_partial != 0.0) {
      rk.push_back(static_cast<double>(r.k));
      rv.push_back(std::abs(r.regret_partial));
    }
  }
  if (rk.size() >= 2) s.regret_exponent = fit_log_log(rk, rv).slope;
  return s;
}

std::string file_stem(const std::string& label) {
  std::string out;
  for (char c : label) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(keep ? c : '_');
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "run" : out;
}

std::string render_svg(const std::vector<RunResult>& runs) {
  constexpr double width = 800, height = 500, left = 70, right = 180, top = 30, bottom = 50;
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  double kmax = 1, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& run : runs) {
    for (const auto& r : run.records) {
      kmax = std::max(kmax, static_cast<double>(r.k));
      if (r.suboptimality > 0.0) {
        lo = std::min(lo, std::log10(r.suboptimality));
        hi = std::max(hi, std::log10(r.suboptimality));
      }
    }
  }
  if (!std::isfinite(lo)) lo = -1, hi = 0;
  lo = std::floor(lo);
  hi = std::ceil(hi);
  if (hi <= lo) hi = lo + 1;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double k) { return left + pw * (k - 1) / std::max(1.0, kmax - 1); };
  auto py = [&](double v) { return top + ph * (hi - std::log10(v)) / (hi - lo); };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = lo; d <= hi; d += 1) {
    const double y = top + ph * (hi - d) / (hi - lo);
    os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">k</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
     << ")\" text-anchor=\"middle\">suboptimality</text>\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const char* color = palette[i % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    // Thin long runs to at most ~2000 vertices.
    const std::size_t stride = std::max<std::size_t>(1, runs[i].records.size() / 2000);
    for (std::size_t j = 0; j < runs[i].records.size(); j += stride) {
      const auto& r = runs[i].records[j];
      if (r.suboptimality > 0.0) os << px(static_cast<double>(r.k)) << ',' << py(r.suboptimality) << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(i);
    os << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\""
       << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly + 4 << "\">" << runs[i].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<RunSummary> emit_report(const std::vector<RunResult>& runs, const std::filesystem::path& dir,
                                    const std::string& extra_json) {
  bool any = false;
  for (const auto& run : runs) any = any || !run.records.empty();
  if (!any) throw std::invalid_argument("emit_report: no records to report");
  std::filesystem::create_directories(dir);

  std::vector<RunSummary> summaries;
  json runs_json = json::array();
  for (const RunResult& run : runs) {
    if (!run.records.empty()) write_records(dir / (file_stem(run.label) + ".csv"), run.records);
    const RunSummary s = summarize(run);
    json j = {{"label", s.label},
              {"algo", s.algo},
              {"csv", file_stem(run.label) + ".csv"},
              {"final_suboptimality", s.final_suboptimality},
              {"hyperparams",
               {{"alpha", run.hp.alpha}, {"beta", run.hp.beta}, {"rho", run.hp.rho},
                {"tau1", run.hp.tau1}, {"tau2", run.hp.tau2}}}};
    j["convergence_rate"] = s.convergence_rate ? json(*s.convergence_rate) : json(nullptr);
    j["convergence_r2"] = s.convergence_r2 ? json(*s.convergence_r2) : json(nullptr);
    j["regret_exponent"] = s.regret_exponent ? json(*s.regret_exponent) : json(nullptr);
    j["fscore"] = s.fscore ? json(*s.fscore) : json(nullptr);
    if (!s.error.empty()) j["error"] = s.error;
    runs_json.push_back(j);
    summaries.push_back(s);
  }
  json summary = json::parse(extra_json);
  summary["runs"] = runs_json;
  {
    std::ofstream out(dir / "summary.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
    out << summary.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "suboptimality.svg");
    if (!out) throw std::runtime_error("cannot write " + (dir / "suboptimality.svg").string());
    out << render_svg(runs);
  }
  return summaries;
}

}  // namespace ogl
