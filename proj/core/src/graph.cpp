#include "ogl/graph.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ogl {

EdgeIndexing::EdgeIndexing(std::size_t n) : n_(n), r_(n * (n - 1) / 2) {
  if (n < 2) throw std::invalid_argument("EdgeIndexing: need at least 2 nodes");
}

std::size_t EdgeIndexing::slot_of(std::size_t i, std::size_t j) const {
  if (i >= j || j >= n_) {
    throw std::invalid_argument("slot_of: require i < j < n, got (" + std::to_string(i) +
                                "," + std::to_string(j) + ") with n=" + std::to_string(n_));
  }
  // Slots preceding row i: sum_{a<i} (n-1-a) = i(2n-i-1)/2.
  return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> EdgeIndexing::pair_of(std::size_t slot) const {
  if (slot >= r_) throw std::out_of_range("pair_of: slot out of range");
  std::size_t i = 0;
  std::size_t row_len = n_ - 1;
  while (slot >= row_len) {
    slot -= row_len;
    ++i;
    --row_len;
  }
  return {i, i + 1 + slot};
}

std::size_t EdgeIndexing::nodes_for_slots(std::size_t r) {
  const auto n = static_cast<std::size_t>(std::llround((1.0 + std::sqrt(1.0 + 8.0 * r)) / 2.0));
  if (n < 2 || n * (n - 1) / 2 != r) {
    throw std::invalid_argument("edge vector length " + std::to_string(r) +
                                " is not n(n-1)/2 for any n >= 2");
  }
  return n;
}

DegreeMap::DegreeMap(std::size_t n) : DegreeMap(EdgeIndexing(n)) {}

DegreeMap::DegreeMap(const EdgeIndexing& indexing) : indexing_(indexing) {
  const std::size_t n = indexing_.nodes();
  heads_.reserve(indexing_.slots());
  tails_.reserve(indexing_.slots());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      heads_.push_back(i);
      tails_.push_back(j);
    }
  }
}

Vector DegreeMap::apply(const Vector& w) const {
  if (static_cast<std::size_t>(w.size()) != slots()) {
    throw std::invalid_argument("degree: edge vector length mismatch");
  }
  Vector d = Vector::Zero(static_cast<Eigen::Index>(nodes()));
  for (std::size_t e = 0; e < slots(); ++e) {
    const double we = w[static_cast<Eigen::Index>(e)];
    d[static_cast<Eigen::Index>(heads_[e])] += we;
    d[static_cast<Eigen::Index>(tails_[e])] += we;
  }
  return d;
}

Vector DegreeMap::adjoint(const Vector& u) const {
  if (static_cast<std::size_t>(u.size()) != nodes()) {
    throw std::invalid_argument("degree_adjoint: nodal vector length mismatch");
  }
  Vector out(static_cast<Eigen::Index>(slots()));
  for (std::size_t e = 0; e < slots(); ++e) {
    out[static_cast<Eigen::Index>(e)] =
        u[static_cast<Eigen::Index>(heads_[e])] + u[static_cast<Eigen::Index>(tails_[e])];
  }
  return out;
}

Vector degree(const DegreeMap& map, const Vector& w) { return map.apply(w); }

Vector degree_adjoint(const DegreeMap& map, const Vector& u) { return map.adjoint(u); }

Matrix adjacency(const EdgeIndexing& indexing, const Vector& w) {
  if (static_cast<std::size_t>(w.size()) != indexing.slots()) {
    throw std::invalid_argument("adjacency: edge vector length mismatch");
  }
  const auto n = static_cast<Eigen::Index>(indexing.nodes());
  Matrix adj = Matrix::Zero(n, n);
  Eigen::Index e = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j, ++e) {
      adj(i, j) = w[e];
      adj(j, i) = w[e];
    }
  }
  return adj;
}

Matrix laplacian(const EdgeIndexing& indexing, const Vector& w) {
  Matrix adj = adjacency(indexing, w);
  Matrix lap = -adj;
  lap.diagonal() = adj.rowwise().sum();
  return lap;
}

double total_variation(const DegreeMap& map, const Vector& w, const Vector& x) {
  if (static_cast<std::size_t>(w.size()) != map.slots() ||
      static_cast<std::size_t>(x.size()) != map.nodes()) {
    throw std::invalid_argument("total_variation: shape mismatch");
  }
  double tv = 0.0;
  for (std::size_t e = 0; e < map.slots(); ++e) {
    const double diff = x[static_cast<Eigen::Index>(map.head(e))] -
                        x[static_cast<Eigen::Index>(map.tail(e))];
    tv += w[static_cast<Eigen::Index>(e)] * diff * diff;
  }
  return tv;
}

double estimate_operator_norm_squared(const DegreeMap& map, int max_iter, double tol) {
  // Deterministic, non-symmetric start so the top eigenvector is not missed.
  Vector x(static_cast<Eigen::Index>(map.slots()));
  for (Eigen::Index e = 0; e < x.size(); ++e) x[e] = 1.0 + 0.5 * std::sin(1.0 + 0.7 * e);
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector y = map.adjoint(map.apply(x));
    const double next = x.dot(y);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
    if (std::abs(next - estimate) <= tol * std::max(1.0, std::abs(next))) {
      return next;
    }
    estimate = next;
  }
  return estimate;
}

std::size_t edge_count(const Vector& w, double threshold) {
  return static_cast<std::size_t>((w.array() > threshold).count());
}

}  // namespace ogl
