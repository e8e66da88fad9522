#pragma once

#include "ogl/graph.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace ogl {

/// Forgetting-factor schedule for the running dissimilarity.
///
/// Stationary mode uses gamma_k = 1/k (exact running sample mean). Dynamic
/// mode uses a constant gamma in (0,1), an exponentially weighted average.
struct ForgettingSchedule {
  enum class Mode { stationary, dynamic };

  Mode mode = Mode::stationary;
  double fixed_gamma = 2e-3;

  static ForgettingSchedule stationary() { return {}; }
  static ForgettingSchedule dynamic(double gamma);

  /// Parses the CLI form: "stationary" or "fixed:<value>".
  static ForgettingSchedule parse(std::string_view text);
  std::string to_string() const;

  /// gamma applied at step k (1-based).
  double gamma_at(std::uint64_t k) const;
};

/// Squared pairwise differences (x_i - x_j)^2 laid out by edge slot.
Vector instantaneous_dissimilarity(const DegreeMap& map, const Vector& x);

/// Running z_{1:k} = (1 - gamma_k) z_{1:k-1} + gamma_k zbar_k.
///
/// z_{1:0} is zero; in stationary mode gamma_1 = 1, so z_{1:1} = zbar_1. In
/// dynamic mode the first sample seeds the state directly.
class DissimilarityState {
 public:
  DissimilarityState(std::size_t slots, ForgettingSchedule schedule);
  /// Resumes from an existing running vector after `steps` updates.
  DissimilarityState(Vector z_run, std::uint64_t steps, ForgettingSchedule schedule);

  /// Blends in one instantaneous vector. Rejects negative entries and a
  /// length mismatch.
  void update(const Vector& z_bar);
  /// Value-semantics form of update().
  DissimilarityState updated(const Vector& z_bar) const;

  const Vector& running() const { return z_run_; }
  std::uint64_t steps() const { return k_; }
  const ForgettingSchedule& schedule() const { return schedule_; }

 private:
  Vector z_run_;
  std::uint64_t k_ = 0;
  ForgettingSchedule schedule_;
};

}  // namespace ogl
