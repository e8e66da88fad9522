#pragma once

#include "ogl/graph.hpp"
#include "ogl/prox.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ogl {

/// "%.17g": enough digits for an exact double round trip.
std::string format_double(double value);

/// Edge list: header `i,j,weight`, 0-based ids with i < j. Only slots with a
/// nonzero weight are written.
void write_edge_list(const std::filesystem::path& path, const EdgeIndexing& indexing,
                     const Vector& w);
/// When `n` is absent it is taken as the largest node id + 1.
Vector read_edge_list(const std::filesystem::path& path, std::optional<std::size_t> n = {});

/// Signal matrix: one signal per row, n columns, no header.
void write_signals(const std::filesystem::path& path, const Matrix& signals);
/// Skips a leading non-numeric header line if present.
Matrix read_signals(const std::filesystem::path& path);

/// Residual trace: header `iter,w_change,primal_residual,objective`.
void write_trace(const std::filesystem::path& path, const std::vector<TraceRow>& trace);

/// Splits one CSV line on commas (no quoting).
std::vector<std::string> split_csv_line(const std::string& line);
double parse_double(const std::string& field);

}  // namespace ogl
