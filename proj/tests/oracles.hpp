#pragma once

// Test-only reference computations. None of these call into the library's
// solver paths; they rebuild the quantities from dense matrices, brute-force
// enumeration or scalar numerical minimization.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline std::vector<std::pair<std::size_t, std::size_t>> enumerate_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i < j) pairs.emplace_back(i, j);
  return pairs;
}

/// S as an explicit n x r 0/1 matrix.
inline Mat dense_degree_map(std::size_t n) {
  const auto pairs = enumerate_pairs(n);
  Mat s = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    s(static_cast<Eigen::Index>(pairs[e].first), static_cast<Eigen::Index>(e)) = 1.0;
    s(static_cast<Eigen::Index>(pairs[e].second), static_cast<Eigen::Index>(e)) = 1.0;
  }
  return s;
}

inline Mat dense_adjacency(std::size_t n, const Vec& w) {
  const auto pairs = enumerate_pairs(n);
  Mat a = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    a(static_cast<Eigen::Index>(pairs[e].first), static_cast<Eigen::Index>(pairs[e].second)) = w[static_cast<Eigen::Index>(e)];
    a(static_cast<Eigen::Index>(pairs[e].second), static_cast<Eigen::Index>(pairs[e].first)) = w[static_cast<Eigen::Index>(e)];
  }
  return a;
}

/// Golden-section minimization of a unimodal scalar function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-13) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  // The boundary can be the minimizer when the constraint is active.
  return f(lo) <= f(x) ? lo : x;
}

/// Entrywise minimizer of (1/2tau)(u-w)^2 + 2 z u + beta u^2 over u >= 0.
inline Vec prox_f_numeric(const Vec& w, const Vec& z, double tau, double beta) {
  Vec out(w.size());
  for (Eigen::Index e = 0; e < w.size(); ++e) {
    auto obj = [&](double u) { return (u - w[e]) * (u - w[e]) / (2 * tau) + 2 * z[e] * u + beta * u * u; };
    out[e] = golden_min(obj, 0.0, std::abs(w[e]) + 10.0);
  }
  return out;
}

/// Entrywise minimizer of (1/2tau)(u-v)^2 - alpha log u over u > 0.
inline Vec prox_g_numeric(const Vec& v, double tau, double alpha) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    auto obj = [&](double u) { return (u - v[i]) * (u - v[i]) / (2 * tau) - alpha * std::log(u); };
    out[i] = golden_min(obj, 1e-300, std::abs(v[i]) + 10.0 + std::sqrt(tau * alpha) * 10.0);
  }
  return out;
}

struct Triple {
  Vec w, v, lambda;
};

/// Straight-line dense transcription of one proximal ADMM iteration, with the
/// v-step written as the minimizer of the augmented Lagrangian plus the
/// (1/tau2 - rho)||v - v_k||^2 / 2 proximity term.
inline Triple padmm_dense(const Mat& s, const Triple& in, const Vec& z, double alpha, double beta, double rho,
                          double tau1, double tau2) {
  Triple out;
  Vec wbar = in.w - tau1 * rho * s.transpose() * (s * in.w - in.v + in.lambda / rho);
  out.w = ((wbar - 2 * tau1 * z) / (2 * tau1 * beta + 1)).cwiseMax(0.0);
  Vec vbar = in.v + tau2 * rho * (s * out.w - in.v) + tau2 * in.lambda;
  out.v = Vec(vbar.size());
  for (Eigen::Index i = 0; i < vbar.size(); ++i) {
    out.v[i] = 0.5 * (vbar[i] + std::sqrt(vbar[i] * vbar[i] + 4 * tau2 * alpha));
  }
  out.lambda = in.lambda + rho * (s * out.w - out.v);
  return out;
}

/// 2 z^T w + beta ||w||^2 - alpha 1^T log(S w), evaluated densely.
inline double dense_objective(const Mat& s, const Vec& w, const Vec& z, double alpha, double beta) {
  if ((w.array() < 0).any()) return INFINITY;
  Vec d = s * w;
  if ((d.array() <= 0).any()) return INFINITY;
  return 2 * z.dot(w) + beta * w.squaredNorm() - alpha * d.array().log().sum();
}

/// Exact cyclic coordinate minimization of the edge problem. Each coordinate
/// subproblem is a strictly convex scalar problem solved by bisection on its
/// derivative 2 z_e + 2 beta u - alpha (1/(d_i - w_e + u) + 1/(d_j - w_e + u)).
inline Vec coordinate_descent(std::size_t n, const Vec& z, double alpha, double beta, int sweeps = 20000,
                              double tol = 1e-15) {
  const auto pairs = enumerate_pairs(n);
  const Mat s = dense_degree_map(n);
  Vec w = Vec::Constant(static_cast<Eigen::Index>(pairs.size()), 1.0);
  Vec d = s * w;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      const auto i = static_cast<Eigen::Index>(pairs[e].first), j = static_cast<Eigen::Index>(pairs[e].second);
      const auto ee = static_cast<Eigen::Index>(e);
      const double di = d[i] - w[ee], dj = d[j] - w[ee];
      auto deriv = [&](double u) { return 2 * z[ee] + 2 * beta * u - alpha * (1 / (di + u) + 1 / (dj + u)); };
      double lo = std::max(0.0, -std::min(di, dj)) + 1e-300, hi = lo + 1.0;
      double next;
      if (lo == 1e-300 && di > 0 && dj > 0 && deriv(0.0) >= 0) {
        next = 0.0;
      } else {
        while (deriv(hi) < 0) hi = lo + 2 * (hi - lo);
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          (deriv(mid) < 0 ? lo : hi) = mid;
        }
        next = 0.5 * (lo + hi);
      }
      moved = std::max(moved, std::abs(next - w[ee]));
      d[i] += next - w[ee];
      d[j] += next - w[ee];
      w[ee] = next;
    }
    if (moved < tol) break;
  }
  return w;
}

inline Vec random_vector(std::mt19937_64& rng, Eigen::Index size, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = u(rng);
  return v;
}

}  // namespace oracle
