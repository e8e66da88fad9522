#pragma once

#include "ogl/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ogl {

struct GraphModelSpec {
  enum class Model { gaussian, er, pa };

  Model model = Model::gaussian;
  std::size_t n = 20;
  // gaussian: nodes uniform in the unit square, weight exp(-dist^2 / (2 scale^2)),
  // weights strictly below threshold are dropped.
  double threshold = 0.8;
  double scale = 0.2;
  // er: independent edges with this probability, unit weight.
  double edge_prob = 0.1;
  // pa: clique of pa_initial nodes, then pa_edges degree-proportional links per new node.
  std::size_t pa_initial = 2;
  std::size_t pa_edges = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

std::string to_string(GraphModelSpec::Model model);
GraphModelSpec::Model parse_model(const std::string& name);

struct ChangePoint {
  std::size_t step = 0;  ///< 0-based index of the first sample drawn on the new graph
  double fraction = 0.1;
};

struct StreamSpec {
  std::size_t p = 1000;
  double noise_variance = 0.01;
  std::vector<ChangePoint> change_points;

  void validate() const;
};

/// Splits one user seed into independent deterministic sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Vector generate_graph(const GraphModelSpec& spec);

/// p x n matrix; row k is L^{+1/2} eps_k + sqrt(noise_variance) xi_k with
/// eps, xi standard normal. Eigenvalues of L below 1e-10 count as zero.
Matrix generate_smooth_signals(const EdgeIndexing& indexing, const Vector& w, std::size_t p,
                               double noise_variance, std::uint64_t seed);

/// Removes ceil(fraction * nnz) present edges and adds as many edges on slots
/// that were empty before, with weights drawn from the same model.
Vector resample_edges(const Vector& w, double fraction, const GraphModelSpec& spec,
                      std::uint64_t seed);

struct Segment {
  std::size_t begin = 0;  ///< first sample index (inclusive)
  std::size_t end = 0;    ///< one past the last sample index
  Vector truth;
};

struct Stream {
  Matrix signals;  ///< p x n, one signal per row
  std::vector<Segment> segments;

  std::size_t segment_index(std::size_t sample) const;
  const Vector& truth_at(std::size_t sample) const {
    return segments[segment_index(sample)].truth;
  }
};

/// Piecewise-stationary stream: the ground truth is constant between change
/// points and resampled at each one.
Stream generate_stream(const GraphModelSpec& graph_spec, const StreamSpec& stream_spec);

}  // namespace ogl
