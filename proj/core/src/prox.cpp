#include "ogl/prox.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ogl {

Hyperparams Hyperparams::defaults(std::size_t n, double alpha, double beta, double rho) {
  Hyperparams hp;
  hp.alpha = alpha;
  hp.beta = beta;
  hp.rho = rho;
  hp.tau1 = 0.9 / (rho * 2.0 * static_cast<double>(n - 1));
  hp.tau2 = 0.9 / rho;
  return hp;
}

std::string Hyperparams::violation(std::size_t n) const {
  std::ostringstream os;
  if (!(alpha > 0.0)) os << "alpha must be > 0; ";
  if (!(beta > 0.0)) os << "beta must be > 0; ";
  if (!(rho > 0.0)) {
    os << "rho must be > 0; ";
    return os.str();
  }
  const double tau1_max = 1.0 / (rho * 2.0 * static_cast<double>(n - 1));
  if (!(tau1 > 0.0 && tau1 < tau1_max)) {
    os << "tau1 must lie in (0, " << tau1_max << "); ";
  }
  if (!(tau2 > 0.0 && tau2 <= 1.0 / rho)) os << "tau2 must lie in (0, 1/rho]; ";
  return os.str();
}

void Hyperparams::validate(std::size_t n) const {
  const std::string why = violation(n);
  if (!why.empty()) throw std::invalid_argument("hyperparameters: " + why);
}

PadmmState PadmmState::initial(const DegreeMap& map) {
  const auto r = static_cast<Eigen::Index>(map.slots());
  const auto n = static_cast<Eigen::Index>(map.nodes());
  return {Vector::Zero(r), Vector::Ones(n), Vector::Zero(n)};
}

Vector prox_f(const Vector& w_in, const Vector& z, double tau, double beta) {
  if (!(tau > 0.0)) throw std::invalid_argument("prox_f: tau must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("prox_f: beta must be > 0");
  if (w_in.size() != z.size()) throw std::invalid_argument("prox_f: length mismatch");
  return ((w_in - 2.0 * tau * z) / (2.0 * tau * beta + 1.0)).cwiseMax(0.0);
}

Vector prox_g(const Vector& v_in, double tau, double alpha) {
  if (!(tau > 0.0)) throw std::invalid_argument("prox_g: tau must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("prox_g: alpha must be > 0");
  const double c = 4.0 * tau * alpha;
  return 0.5 * (v_in.array() + (v_in.array().square() + c).sqrt()).matrix();
}

void padmm_advance(const DegreeMap& map, PadmmState& s, const Vector& z, const Hyperparams& hp) {
  const Vector residual = map.apply(s.w) - s.v + s.lambda / hp.rho;
  const Vector w_bar = s.w - hp.tau1 * hp.rho * map.adjoint(residual);
  s.w = prox_f(w_bar, z, hp.tau1, hp.beta);
  const Vector deg = map.apply(s.w);
  const Vector v_bar =
      (1.0 - hp.rho * hp.tau2) * s.v + hp.rho * hp.tau2 * deg + hp.tau2 * s.lambda;
  s.v = prox_g(v_bar, hp.tau2, hp.alpha);
  s.lambda += hp.rho * (deg - s.v);
}

PadmmState padmm_step(const DegreeMap& map, const PadmmState& state, const Vector& z,
                      const Hyperparams& hp) {
  hp.validate(map.nodes());
  if (static_cast<std::size_t>(z.size()) != map.slots()) {
    throw std::invalid_argument("padmm_step: dissimilarity length mismatch");
  }
  if ((z.array() < 0.0).any()) throw std::invalid_argument("padmm_step: z must be >= 0");
  PadmmState next = state;
  padmm_advance(map, next, z, hp);
  return next;
}

double objective(const DegreeMap& map, const Vector& w, const Vector& z, const Hyperparams& hp) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if ((w.array() < 0.0).any()) return inf;
  const Vector d = map.apply(w);
  if ((d.array() <= 0.0).any()) return inf;
  return 2.0 * z.dot(w) + hp.beta * w.squaredNorm() - hp.alpha * d.array().log().sum();
}

double kkt_residual(const DegreeMap& map, const Vector& w, const Vector& z,
                    const Hyperparams& hp) {
  if ((w.array() < 0.0).any()) return std::numeric_limits<double>::infinity();
  const Vector d = map.apply(w);
  if ((d.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
  const Vector inv_d = d.cwiseInverse();
  const Vector grad = 2.0 * z + 2.0 * hp.beta * w - hp.alpha * map.adjoint(inv_d);
  return (w - (w - grad).cwiseMax(0.0)).lpNorm<Eigen::Infinity>();
}

BatchResult batch_solve(const DegreeMap& map, const Vector& z, const Hyperparams& hp,
                        const BatchOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("batch_solve: tol must be > 0");
  if (options.max_iter < 1) throw std::invalid_argument("batch_solve: max_iter must be >= 1");
  if (static_cast<std::size_t>(z.size()) != map.slots()) {
    throw std::invalid_argument("batch_solve: dissimilarity length mismatch");
  }
  if ((z.array() < 0.0).any()) throw std::invalid_argument("batch_solve: z must be >= 0");
  hp.validate(map.nodes());

  BatchResult result;
  result.state = PadmmState::initial(map);
  for (int it = 1; it <= options.max_iter; ++it) {
    const Vector previous = result.state.w;
    padmm_advance(map, result.state, z, hp);
    const double change = (result.state.w - previous).norm() / std::max(1.0, previous.norm());
    const double primal = (map.apply(result.state.w) - result.state.v).norm();
    if (options.keep_trace) {
      result.trace.push_back({it, change, primal, objective(map, result.state.w, z, hp)});
    }
    result.iterations = it;
    if (change < options.tol && primal < options.tol) {
      result.converged = true;
      break;
    }
  }
  result.w = result.state.w;
  return result;
}

}  // namespace ogl
