#include "ogl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ogl {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_numeric_row(const std::vector<std::string>& fields) {
  for (const auto& f : fields) {
    try {
      parse_double(f);
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& field) {
  if (field == "nan" || field == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + field + "'");
  }
  if (used != field.size()) throw std::invalid_argument("not a number: '" + field + "'");
  return value;
}

void write_edge_list(const std::filesystem::path& path, const EdgeIndexing& indexing,
                     const Vector& w) {
  if (static_cast<std::size_t>(w.size()) != indexing.slots()) {
    throw std::invalid_argument("write_edge_list: edge vector length mismatch");
  }
  auto out = open_out(path);
  out << "i,j,weight\n";
  for (std::size_t e = 0; e < indexing.slots(); ++e) {
    const double we = w[static_cast<Eigen::Index>(e)];
    if (we == 0.0) continue;
    const auto [i, j] = indexing.pair_of(e);
    out << i << ',' << j << ',' << format_double(we) << '\n';
  }
}

Vector read_edge_list(const std::filesystem::path& path, std::optional<std::size_t> n) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "i,j,weight") {
    throw std::runtime_error(path.string() + ": expected header 'i,j,weight'");
  }
  struct Row {
    std::size_t i, j;
    double weight;
  };
  std::vector<Row> rows;
  std::size_t max_id = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 3 fields");
    }
    const long long i = std::stoll(f[0]);
    const long long j = std::stoll(f[1]);
    const double weight = parse_double(f[2]);
    if (i < 0 || j <= i) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": need 0 <= i < j");
    }
    if (!(weight >= 0.0)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": negative weight");
    }
    rows.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), weight});
    max_id = std::max(max_id, static_cast<std::size_t>(j));
  }
  const EdgeIndexing idx(n.value_or(max_id + 1));
  Vector w = Vector::Zero(static_cast<Eigen::Index>(idx.slots()));
  for (const Row& r : rows) w[static_cast<Eigen::Index>(idx.slot_of(r.i, r.j))] = r.weight;
  return w;
}

void write_signals(const std::filesystem::path& path, const Matrix& signals) {
  auto out = open_out(path);
  for (Eigen::Index k = 0; k < signals.rows(); ++k) {
    for (Eigen::Index i = 0; i < signals.cols(); ++i) {
      if (i > 0) out << ',';
      out << format_double(signals(k, i));
    }
    out << '\n';
  }
}

Matrix read_signals(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (first && !is_numeric_row(f)) {
      first = false;
      continue;
    }
    first = false;
    std::vector<double> row;
    row.reserve(f.size());
    for (const auto& s : f) row.push_back(parse_double(s));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path.string() + ": ragged signal rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": no signals");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = rows[k][i];
    }
  }
  if (!m.allFinite()) throw std::runtime_error(path.string() + ": signals must be finite");
  return m;
}

void write_trace(const std::filesystem::path& path, const std::vector<TraceRow>& trace) {
  auto out = open_out(path);
  out << "iter,w_change,primal_residual,objective\n";
  for (const TraceRow& t : trace) {
    out << t.iter << ',' << format_double(t.w_change) << ',' << format_double(t.primal_residual)
        << ',' << format_double(t.objective) << '\n';
  }
}

}  // namespace ogl
