#pragma once

#include "ogl/graph.hpp"

#include <string>
#include <vector>

namespace ogl {

/// Regularization (alpha, beta) and proximal-ADMM (rho, tau1, tau2) weights.
struct Hyperparams {
  double alpha = 1.0;  ///< log-barrier weight on degrees
  double beta = 1.0;   ///< squared-norm weight on edges
  double rho = 1.0;    ///< augmented Lagrangian weight
  double tau1 = 0.0;   ///< w step, 0 < tau1 < 1/(rho * 2(n-1))
  double tau2 = 0.0;   ///< v step, 0 < tau2 <= 1/rho

  /// rho = 1, tau1 = 0.9 / (rho 2(n-1)), tau2 = 0.9 / rho.
  static Hyperparams defaults(std::size_t n, double alpha = 1.0, double beta = 1.0,
                              double rho = 1.0);

  /// Empty string when admissible for an n-node problem, otherwise the reason.
  /// tau2 = 1/rho is accepted: it is the H = 0 regime used for regret.
  std::string violation(std::size_t n) const;
  void validate(std::size_t n) const;
};

/// Primal edge weights w, degree proxy v and multiplier lambda.
struct PadmmState {
  Vector w;
  Vector v;
  Vector lambda;

  /// w = 0, v = 1, lambda = 0.
  static PadmmState initial(const DegreeMap& map);
};

/// argmin_u (1/2tau)||u - w_in||^2 + 2 z^T u + beta ||u||^2 + indicator(u >= 0).
Vector prox_f(const Vector& w_in, const Vector& z, double tau, double beta);

/// argmin_u (1/2tau)||u - v_in||^2 - alpha sum log u_i. Strictly positive.
Vector prox_g(const Vector& v_in, double tau, double alpha);

/// One proximal ADMM iteration against the dissimilarity vector z.
///
/// Order: w-step through prox_f, v-step through prox_g using the fresh w,
/// then the dual ascent on S w - v. The v-step linearization point is
///   vbar = (1 - rho tau2) v + rho tau2 S w+ + tau2 lambda,
/// which is the minimizer form of the augmented Lagrangian with the
/// (1/tau2 - rho) I proximity term.
PadmmState padmm_step(const DegreeMap& map, const PadmmState& state, const Vector& z,
                      const Hyperparams& hp);

/// In-place form used on hot paths; hyperparameters are assumed validated.
void padmm_advance(const DegreeMap& map, PadmmState& state, const Vector& z,
                   const Hyperparams& hp);

/// 2 z^T w + beta ||w||^2 - alpha 1^T log(S w); +inf outside the domain.
double objective(const DegreeMap& map, const Vector& w, const Vector& z, const Hyperparams& hp);

/// Projected-gradient optimality residual ||w - max(w - grad, 0)||_inf of
/// the edge problem. Zero exactly at its minimizer; +inf off the domain.
double kkt_residual(const DegreeMap& map, const Vector& w, const Vector& z,
                    const Hyperparams& hp);

struct TraceRow {
  int iter = 0;
  double w_change = 0.0;
  double primal_residual = 0.0;
  double objective = 0.0;
};

struct BatchResult {
  Vector w;
  PadmmState state;
  std::vector<TraceRow> trace;
  int iterations = 0;
  bool converged = false;
};

struct BatchOptions {
  double tol = 1e-9;
  int max_iter = 100000;
  bool keep_trace = true;
};

/// Runs padmm_step from PadmmState::initial until the relative w change and
/// ||S w - v|| both drop below tol, or max_iter is reached (reported through
/// `converged`, not thrown).
BatchResult batch_solve(const DegreeMap& map, const Vector& z, const Hyperparams& hp,
                        const BatchOptions& options = {});

}  // namespace ogl
