#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

namespace ogl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Bijection between edge slots and node pairs (i, j), i < j, in
/// lexicographic order: (0,1), (0,2), ..., (0,n-1), (1,2), ...
///
/// Every serialized edge vector in this project uses this layout.
class EdgeIndexing {
 public:
  explicit EdgeIndexing(std::size_t n);

  std::size_t nodes() const { return n_; }
  std::size_t slots() const { return r_; }

  /// Throws std::invalid_argument unless i < j < n.
  std::size_t slot_of(std::size_t i, std::size_t j) const;
  std::pair<std::size_t, std::size_t> pair_of(std::size_t slot) const;

  /// Recovers n from an edge-vector length r = n(n-1)/2.
  static std::size_t nodes_for_slots(std::size_t r);

 private:
  std::size_t n_;
  std::size_t r_;
};

/// The edge-to-degree operator S, never materialized. Each slot stores its
/// endpoint pair so that S w and S^T u are single O(r) passes.
class DegreeMap {
 public:
  explicit DegreeMap(std::size_t n);
  explicit DegreeMap(const EdgeIndexing& indexing);

  const EdgeIndexing& indexing() const { return indexing_; }
  std::size_t nodes() const { return indexing_.nodes(); }
  std::size_t slots() const { return indexing_.slots(); }

  /// S w: nodal degrees of the graph encoded by w.
  Vector apply(const Vector& w) const;
  /// S^T u: entry e is u_i + u_j for slot e <-> (i, j).
  Vector adjoint(const Vector& u) const;

  /// Largest squared singular value of S, which is exactly 2(n-1).
  double norm_squared() const { return 2.0 * static_cast<double>(nodes() - 1); }

  std::size_t head(std::size_t slot) const { return heads_[slot]; }
  std::size_t tail(std::size_t slot) const { return tails_[slot]; }

 private:
  EdgeIndexing indexing_;
  std::vector<std::size_t> heads_;
  std::vector<std::size_t> tails_;
};

Vector degree(const DegreeMap& map, const Vector& w);
Vector degree_adjoint(const DegreeMap& map, const Vector& u);

/// Symmetric hollow adjacency matrix reconstructed from w. O(n^2).
Matrix adjacency(const EdgeIndexing& indexing, const Vector& w);

/// Dense L = diag(d) - W. Intended for tests and metrics only.
Matrix laplacian(const EdgeIndexing& indexing, const Vector& w);

/// Dirichlet energy sum_{i<j} W_ij (x_i - x_j)^2, evaluated in O(r).
double total_variation(const DegreeMap& map, const Vector& w, const Vector& x);

/// Power iteration estimate of the largest eigenvalue of S^T S.
double estimate_operator_norm_squared(const DegreeMap& map, int max_iter = 1000,
                                      double tol = 1e-12);

/// Number of slots with weight strictly above `threshold`.
std::size_t edge_count(const Vector& w, double threshold = 0.0);

}  // namespace ogl
