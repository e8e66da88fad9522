#include "ogl/online.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace ogl {

OnlineSolverState OnlineSolverState::initial(const DegreeMap& map, const Hyperparams& hp,
                                             ForgettingSchedule schedule) {
  hp.validate(map.nodes());
  return {PadmmState::initial(map), DissimilarityState(map.slots(), schedule), hp, 0};
}

void opadmm_advance(const DegreeMap& map, OnlineSolverState& state, const Vector& x) {
  state.dissim.update(instantaneous_dissimilarity(map, x));
  padmm_advance(map, state.padmm, state.dissim.running(), state.hp);
  ++state.step_count;
}

OnlineSolverState opadmm_step(const DegreeMap& map, OnlineSolverState state, const Vector& x) {
  state.hp.validate(map.nodes());
  opadmm_advance(map, state, x);
  return state;
}

OnlineSolverState pg_initial(const DegreeMap& map, const Hyperparams& hp,
                             ForgettingSchedule schedule) {
  OnlineSolverState state = OnlineSolverState::initial(map, hp, schedule);
  state.padmm.w.setConstant(1.0 / static_cast<double>(map.nodes() - 1));
  state.padmm.v = map.apply(state.padmm.w);
  return state;
}

void online_pg_advance(const DegreeMap& map, OnlineSolverState& state, const Vector& x,
                       const PgOptions& options) {
  const double eta = options.step > 0.0 ? options.step : state.hp.tau1;
  if (!(eta > 0.0)) throw std::invalid_argument("online_pg_step: step size must be > 0");
  if (!(options.epsilon >= 0.0)) throw std::invalid_argument("online_pg_step: epsilon < 0");
  state.dissim.update(instantaneous_dissimilarity(map, x));
  const Hyperparams& hp = state.hp;
  Vector& w = state.padmm.w;
  const Vector barrier = (map.apply(w).array() + options.epsilon).inverse().matrix();
  const Vector grad = 2.0 * state.dissim.running() + 2.0 * hp.beta * w - hp.alpha * map.adjoint(barrier);
  w = (w - eta * grad).cwiseMax(0.0);
  state.padmm.v = map.apply(w);
  state.padmm.lambda.setZero();
  ++state.step_count;
}

OnlineSolverState online_pg_step(const DegreeMap& map, OnlineSolverState state, const Vector& x,
                                 const PgOptions& options) {
  online_pg_advance(map, state, x, options);
  return state;
}

double online_cost(const OnlineSolverState& state) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Vector& w = state.padmm.w;
  const Vector& v = state.padmm.v;
  if ((w.array() < 0.0).any() || (v.array() <= 0.0).any()) return inf;
  const Vector& z = state.dissim.running();
  return 2.0 * z.dot(w) + state.hp.beta * w.squaredNorm() - state.hp.alpha * v.array().log().sum();
}

void RegretLedger::add(double cost) {
  cumulative_ += cost;
  ++count_;
  if (keep_trace_) trace_.push_back(cost);
}

RegretLedger accumulate_regret(RegretLedger ledger, const OnlineSolverState& state) {
  ledger.add(online_cost(state));
  return ledger;
}

double ComparatorAccumulator::value(const DegreeMap& map, const Hyperparams& hp,
                                    const BatchOptions& options) const {
  if (count_ == 0) throw std::invalid_argument("static_comparator: empty history");
  BatchOptions quiet = options;
  quiet.keep_trace = false;
  const Vector z = mean();
  const BatchResult solved = batch_solve(map, z, hp, quiet);
  return static_cast<double>(count_) * objective(map, solved.w, z, hp);
}

double static_comparator(const DegreeMap& map, std::span<const Vector> z_history,
                         const Hyperparams& hp, const BatchOptions& options) {
  ComparatorAccumulator acc(map.slots());
  for (const Vector& z : z_history) acc.add(z);
  return acc.value(map, hp, options);
}

namespace {

constexpr std::uint32_t kStateMagic = 0x4f474c31;  // "OGL1"

class Writer {
 public:
  template <typename T>
  void put(const T& value) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    bytes.insert(bytes.end(), p, p + sizeof(T));
  }
  void put(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) put(v[i]);
  }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (offset_ + sizeof(T) > bytes_.size()) throw std::invalid_argument("state snapshot truncated");
    T value;
    std::memcpy(&value, bytes_.data() + offset_, sizeof(T));
    offset_ += sizeof(T);
    return value;
  }
  Vector get_vector(std::size_t len) {
    Vector v(static_cast<Eigen::Index>(len));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = get<double>();
    return v;
  }
  bool done() const { return offset_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t offset_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_state(const OnlineSolverState& state) {
  Writer out;
  out.put(kStateMagic);
  out.put(static_cast<std::uint64_t>(state.padmm.v.size()));
  out.put(state.step_count);
  out.put(state.dissim.steps());
  const auto& schedule = state.dissim.schedule();
  out.put(static_cast<std::uint8_t>(schedule.mode == ForgettingSchedule::Mode::dynamic));
  out.put(schedule.fixed_gamma);
  for (double h : {state.hp.alpha, state.hp.beta, state.hp.rho, state.hp.tau1, state.hp.tau2}) {
    out.put(h);
  }
  out.put(state.padmm.w);
  out.put(state.padmm.v);
  out.put(state.padmm.lambda);
  out.put(state.dissim.running());
  return out.bytes;
}

OnlineSolverState deserialize_state(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (in.get<std::uint32_t>() != kStateMagic) throw std::invalid_argument("not a state snapshot");
  const auto n = static_cast<std::size_t>(in.get<std::uint64_t>());
  const EdgeIndexing indexing(n);
  const auto steps = in.get<std::uint64_t>();
  const auto dissim_steps = in.get<std::uint64_t>();
  ForgettingSchedule schedule;
  schedule.mode = in.get<std::uint8_t>() != 0 ? ForgettingSchedule::Mode::dynamic
                                              : ForgettingSchedule::Mode::stationary;
  schedule.fixed_gamma = in.get<double>();
  Hyperparams hp;
  hp.alpha = in.get<double>();
  hp.beta = in.get<double>();
  hp.rho = in.get<double>();
  hp.tau1 = in.get<double>();
  hp.tau2 = in.get<double>();
  PadmmState padmm;
  padmm.w = in.get_vector(indexing.slots());
  padmm.v = in.get_vector(n);
  padmm.lambda = in.get_vector(n);
  Vector z = in.get_vector(indexing.slots());
  if (!in.done()) throw std::invalid_argument("state snapshot has trailing bytes");
  return {std::move(padmm), DissimilarityState(std::move(z), dissim_steps, schedule), hp, steps};
}

void OpadmmLearner::init(const DegreeMap& map) {
  map_ = &map;
  state_ = std::make_unique<OnlineSolverState>(OnlineSolverState::initial(map, hp_, schedule_));
}

void OpadmmLearner::step(const Vector& x) {
  if (!state_) throw std::logic_error("OpadmmLearner: init() not called");
  opadmm_advance(*map_, *state_, x);
}

void ProximalGradientLearner::init(const DegreeMap& map) {
  map_ = &map;
  state_ = std::make_unique<OnlineSolverState>(pg_initial(map, hp_, schedule_));
}

void ProximalGradientLearner::step(const Vector& x) {
  if (!state_) throw std::logic_error("ProximalGradientLearner: init() not called");
  online_pg_advance(*map_, *state_, x, options_);
}

std::unique_ptr<OnlineLearner> make_learner(const std::string& algo, const Hyperparams& hp,
                                            ForgettingSchedule schedule) {
  if (algo == "opadmm") return std::make_unique<OpadmmLearner>(hp, schedule);
  if (algo == "pg") return std::make_unique<ProximalGradientLearner>(hp, schedule);
  throw std::invalid_argument("unknown online algorithm '" + algo + "' (expected opadmm|pg)");
}

}  // namespace ogl
