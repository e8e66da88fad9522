#include "ogl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ogl {

namespace {

using Rng = std::mt19937_64;

double kernel_weight(double dist2, double scale) { return std::exp(-dist2 / (2.0 * scale * scale)); }

// Kernel weight of a random node pair in the unit square, conditioned on
// surviving the threshold.
double draw_gaussian_weight(const GraphModelSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const double dx = unit(rng) - unit(rng);
    const double dy = unit(rng) - unit(rng);
    const double k = kernel_weight(dx * dx + dy * dy, spec.scale);
    if (k >= spec.threshold) return k;
  }
  throw std::runtime_error("gaussian model: threshold too strict to draw an edge weight");
}

Vector gaussian_graph(const GraphModelSpec& spec, Rng& rng) {
  const EdgeIndexing idx(spec.n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> xs(spec.n), ys(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    xs[i] = unit(rng);
    ys[i] = unit(rng);
  }
  Vector w = Vector::Zero(static_cast<Eigen::Index>(idx.slots()));
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      const double k = kernel_weight(dx * dx + dy * dy, spec.scale);
      if (k >= spec.threshold) w[static_cast<Eigen::Index>(idx.slot_of(i, j))] = k;
    }
  }
  return w;
}

Vector er_graph(const GraphModelSpec& spec, Rng& rng) {
  const EdgeIndexing idx(spec.n);
  std::bernoulli_distribution present(spec.edge_prob);
  Vector w(static_cast<Eigen::Index>(idx.slots()));
  for (Eigen::Index e = 0; e < w.size(); ++e) w[e] = present(rng) ? 1.0 : 0.0;
  return w;
}

Vector pa_graph(const GraphModelSpec& spec, Rng& rng) {
  const EdgeIndexing idx(spec.n);
  Vector w = Vector::Zero(static_cast<Eigen::Index>(idx.slots()));
  std::vector<double> deg(spec.n, 0.0);
  for (std::size_t i = 0; i < spec.pa_initial; ++i) {
    for (std::size_t j = i + 1; j < spec.pa_initial; ++j) {
      w[static_cast<Eigen::Index>(idx.slot_of(i, j))] = 1.0;
      deg[i] += 1.0;
      deg[j] += 1.0;
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t t = spec.pa_initial; t < spec.n; ++t) {
    std::vector<std::size_t> chosen;
    const std::size_t links = std::min(spec.pa_edges, t);
    while (chosen.size() < links) {
      double total = 0.0;
      for (std::size_t u = 0; u < t; ++u) {
        if (std::find(chosen.begin(), chosen.end(), u) == chosen.end()) total += deg[u];
      }
      double target = unit(rng) * total;
      std::size_t pick = t;
      for (std::size_t u = 0; u < t; ++u) {
        if (std::find(chosen.begin(), chosen.end(), u) != chosen.end()) continue;
        pick = u;
        target -= deg[u];
        if (target < 0.0) break;
      }
      chosen.push_back(pick);
    }
    for (std::size_t u : chosen) {
      w[static_cast<Eigen::Index>(idx.slot_of(u, t))] = 1.0;
      deg[u] += 1.0;
      deg[t] += 1.0;
    }
  }
  return w;
}

}  // namespace

void GraphModelSpec::validate() const {
  if (n < 2) throw std::invalid_argument("graph model: n must be >= 2");
  switch (model) {
    case Model::gaussian:
      if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("gaussian model: threshold must lie in (0,1)");
      }
      if (!(scale > 0.0)) throw std::invalid_argument("gaussian model: scale must be > 0");
      break;
    case Model::er:
      if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
        throw std::invalid_argument("er model: edge probability must lie in [0,1]");
      }
      break;
    case Model::pa:
      if (pa_initial < 2 || pa_initial > n) {
        throw std::invalid_argument("pa model: initial clique size must lie in [2, n]");
      }
      if (pa_edges < 1) throw std::invalid_argument("pa model: edges per new node must be >= 1");
      break;
  }
}

std::string to_string(GraphModelSpec::Model model) {
  switch (model) {
    case GraphModelSpec::Model::gaussian:
      return "gaussian";
    case GraphModelSpec::Model::er:
      return "er";
    case GraphModelSpec::Model::pa:
      return "pa";
  }
  return "?";
}

GraphModelSpec::Model parse_model(const std::string& name) {
  if (name == "gaussian") return GraphModelSpec::Model::gaussian;
  if (name == "er") return GraphModelSpec::Model::er;
  if (name == "pa") return GraphModelSpec::Model::pa;
  throw std::invalid_argument("unknown graph model '" + name + "' (expected gaussian|er|pa)");
}

void StreamSpec::validate() const {
  if (p < 1) throw std::invalid_argument("stream: p must be >= 1");
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("stream: noise variance must be >= 0");
  std::size_t last = 0;
  for (const ChangePoint& cp : change_points) {
    if (cp.step <= last || cp.step >= p) {
      throw std::invalid_argument("stream: change points must be strictly increasing within (0, p)");
    }
    if (!(cp.fraction >= 0.0 && cp.fraction <= 1.0)) {
      throw std::invalid_argument("stream: resample fraction must lie in [0,1]");
    }
    last = cp.step;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vector generate_graph(const GraphModelSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, 0));
  switch (spec.model) {
    case GraphModelSpec::Model::gaussian:
      return gaussian_graph(spec, rng);
    case GraphModelSpec::Model::er:
      return er_graph(spec, rng);
    case GraphModelSpec::Model::pa:
      return pa_graph(spec, rng);
  }
  throw std::logic_error("unreachable graph model");
}

Matrix generate_smooth_signals(const EdgeIndexing& indexing, const Vector& w, std::size_t p,
                               double noise_variance, std::uint64_t seed) {
  if (static_cast<std::size_t>(w.size()) != indexing.slots()) {
    throw std::invalid_argument("generate_smooth_signals: edge vector length mismatch");
  }
  if (!(w.array() > 0.0).any()) {
    throw std::invalid_argument("generate_smooth_signals: graph has no edges");
  }
  if (!(noise_variance >= 0.0)) {
    throw std::invalid_argument("generate_smooth_signals: noise variance must be >= 0");
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(laplacian(indexing, w));
  Vector inv_sqrt = eig.eigenvalues();
  for (Eigen::Index i = 0; i < inv_sqrt.size(); ++i) {
    inv_sqrt[i] = inv_sqrt[i] < 1e-10 ? 0.0 : 1.0 / std::sqrt(inv_sqrt[i]);
  }
  const Matrix factor = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();

  const auto n = static_cast<Eigen::Index>(indexing.nodes());
  const auto rows = static_cast<Eigen::Index>(p);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix eps(n, rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) eps(i, k) = normal(rng);
  }
  Matrix signals = (factor * eps).transpose();
  const double sigma = std::sqrt(noise_variance);
  for (Eigen::Index k = 0; k < rows; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) signals(k, i) += sigma * normal(rng);
  }
  return signals;
}

Vector resample_edges(const Vector& w, double fraction, const GraphModelSpec& spec,
                      std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("resample_edges: fraction must lie in [0,1]");
  }
  spec.validate();
  if (static_cast<std::size_t>(w.size()) != EdgeIndexing(spec.n).slots()) {
    throw std::invalid_argument("resample_edges: edge vector does not match the model's n");
  }
  std::vector<Eigen::Index> present;
  std::vector<Eigen::Index> absent;
  for (Eigen::Index e = 0; e < w.size(); ++e) (w[e] > 0.0 ? present : absent).push_back(e);

  const auto wanted = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(present.size()) - 1e-12));
  const std::size_t moved = std::min(wanted, present.size());
  Rng rng(seed);
  std::shuffle(present.begin(), present.end(), rng);
  std::shuffle(absent.begin(), absent.end(), rng);

  Vector out = w;
  for (std::size_t k = 0; k < moved; ++k) out[present[k]] = 0.0;
  // Fresh edges come from previously empty slots only, so removed edges do
  // not simply reappear.
  const std::size_t added = std::min(moved, absent.size());
  for (std::size_t k = 0; k < added; ++k) {
    out[absent[k]] = spec.model == GraphModelSpec::Model::gaussian ? draw_gaussian_weight(spec, rng) : 1.0;
  }
  return out;
}

std::size_t Stream::segment_index(std::size_t sample) const {
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (sample < segments[s].end) return s;
  }
  throw std::out_of_range("Stream: sample index past the end of the stream");
}

Stream generate_stream(const GraphModelSpec& graph_spec, const StreamSpec& stream_spec) {
  graph_spec.validate();
  stream_spec.validate();
  const EdgeIndexing idx(graph_spec.n);
  Stream stream;
  stream.signals.resize(static_cast<Eigen::Index>(stream_spec.p), static_cast<Eigen::Index>(graph_spec.n));

  Vector truth = generate_graph(graph_spec);
  std::size_t begin = 0;
  for (std::size_t s = 0; s <= stream_spec.change_points.size(); ++s) {
    const std::size_t end =
        s < stream_spec.change_points.size() ? stream_spec.change_points[s].step : stream_spec.p;
    if (s > 0) {
      truth = resample_edges(truth, stream_spec.change_points[s - 1].fraction, graph_spec,
                             derive_seed(graph_spec.seed, 200 + s));
    }
    stream.signals.middleRows(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)) =
        generate_smooth_signals(idx, truth, end - begin, stream_spec.noise_variance,
                                derive_seed(graph_spec.seed, 100 + s));
    stream.segments.push_back({begin, end, truth});
    begin = end;
  }
  return stream;
}

}  // namespace ogl
