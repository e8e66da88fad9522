#pragma once

#include "ogl/dissimilarity.hpp"
#include "ogl/prox.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ogl {

/// Everything an online learner carries between samples. Size is O(r + n)
/// regardless of how many samples have been consumed.
struct OnlineSolverState {
  PadmmState padmm;
  DissimilarityState dissim;
  Hyperparams hp;
  std::uint64_t step_count = 0;

  static OnlineSolverState initial(const DegreeMap& map, const Hyperparams& hp,
                                   ForgettingSchedule schedule);
};

/// One OPADMM step: fold the new signal into z_{1:k}, then exactly one
/// padmm_step against it.
OnlineSolverState opadmm_step(const DegreeMap& map, OnlineSolverState state, const Vector& x);
void opadmm_advance(const DegreeMap& map, OnlineSolverState& state, const Vector& x);

struct PgOptions {
  double step = 0.0;  ///< 0 selects hp.tau1
  double epsilon = 1e-9;
};

/// Starting point of the gradient baseline: uniform weights with unit degrees.
OnlineSolverState pg_initial(const DegreeMap& map, const Hyperparams& hp,
                             ForgettingSchedule schedule);

/// Illustrative projected-gradient baseline on the smoothed objective
///   w+ = max(0, w - eta (2 z + 2 beta w - alpha S^T (1 / (S w + eps)))).
/// v tracks S w and lambda stays zero so the regret ledger stays usable.
OnlineSolverState online_pg_step(const DegreeMap& map, OnlineSolverState state, const Vector& x,
                                 const PgOptions& options = {});
void online_pg_advance(const DegreeMap& map, OnlineSolverState& state, const Vector& x,
                       const PgOptions& options = {});

/// f^(k)(w^(k)) + g(v^(k)) with f^(k) built on z_{1:k}. +inf when v has a
/// nonpositive entry or w a negative one.
double online_cost(const OnlineSolverState& state);

/// Running sum of online costs, optionally with the per-step trace.
class RegretLedger {
 public:
  explicit RegretLedger(bool keep_trace = false) : keep_trace_(keep_trace) {}

  void add(double cost);
  double cumulative_cost() const { return cumulative_; }
  std::size_t count() const { return count_; }
  const std::vector<double>& trace() const { return trace_; }

 private:
  bool keep_trace_;
  double cumulative_ = 0.0;
  std::size_t count_ = 0;
  std::vector<double> trace_;
};

RegretLedger accumulate_regret(RegretLedger ledger, const OnlineSolverState& state);

/// min over S w = v of sum_k f^(k)(w) + g(v). The sum collapses to p times
/// the batch objective at the mean of the z history.
double static_comparator(const DegreeMap& map, std::span<const Vector> z_history,
                         const Hyperparams& hp, const BatchOptions& options = {});

/// Streaming form of static_comparator holding only the running sum of z.
class ComparatorAccumulator {
 public:
  explicit ComparatorAccumulator(std::size_t slots)
      : sum_(Vector::Zero(static_cast<Eigen::Index>(slots))) {}

  void add(const Vector& z) {
    sum_ += z;
    ++count_;
  }
  std::size_t count() const { return count_; }
  Vector mean() const { return sum_ / static_cast<double>(count_); }
  double value(const DegreeMap& map, const Hyperparams& hp, const BatchOptions& options = {}) const;

 private:
  Vector sum_;
  std::size_t count_ = 0;
};

/// Fixed-width binary snapshot of a solver state; its size depends only on n.
std::vector<std::uint8_t> serialize_state(const OnlineSolverState& state);
OnlineSolverState deserialize_state(std::span<const std::uint8_t> bytes);

/// Pluggable online learner. Third-party comparators (dual proximal
/// gradient, prediction-correction, ...) implement this to join the harness.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;

  virtual std::string name() const = 0;
  virtual void init(const DegreeMap& map) = 0;
  virtual void step(const Vector& x) = 0;
  virtual const Vector& current_estimate() const = 0;

  /// Exposes z_{1:k}, w, v for objective and regret metrics. Learners
  /// without that structure return nullptr and those metrics are skipped.
  virtual const OnlineSolverState* solver_state() const { return nullptr; }
};

class OpadmmLearner final : public OnlineLearner {
 public:
  OpadmmLearner(Hyperparams hp, ForgettingSchedule schedule) : hp_(hp), schedule_(schedule) {}

  std::string name() const override { return "opadmm"; }
  void init(const DegreeMap& map) override;
  void step(const Vector& x) override;
  const Vector& current_estimate() const override { return state_->padmm.w; }
  const OnlineSolverState* solver_state() const override { return state_.get(); }

 private:
  Hyperparams hp_;
  ForgettingSchedule schedule_;
  const DegreeMap* map_ = nullptr;
  std::unique_ptr<OnlineSolverState> state_;
};

class ProximalGradientLearner final : public OnlineLearner {
 public:
  ProximalGradientLearner(Hyperparams hp, ForgettingSchedule schedule, PgOptions options = {})
      : hp_(hp), schedule_(schedule), options_(options) {}

  std::string name() const override { return "pg"; }
  void init(const DegreeMap& map) override;
  void step(const Vector& x) override;
  const Vector& current_estimate() const override { return state_->padmm.w; }
  const OnlineSolverState* solver_state() const override { return state_.get(); }

 private:
  Hyperparams hp_;
  ForgettingSchedule schedule_;
  PgOptions options_;
  const DegreeMap* map_ = nullptr;
  std::unique_ptr<OnlineSolverState> state_;
};

/// "opadmm" or "pg".
std::unique_ptr<OnlineLearner> make_learner(const std::string& algo, const Hyperparams& hp,
                                            ForgettingSchedule schedule);

}  // namespace ogl
