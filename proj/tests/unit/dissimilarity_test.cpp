#include "ogl/dissimilarity.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using ogl::DegreeMap;
using ogl::DissimilarityState;
using ogl::ForgettingSchedule;
using ogl::Vector;

TEST(InstantaneousDissimilarity, SquaredDifferences) {
  const DegreeMap map(3);
  const Vector z = ogl::instantaneous_dissimilarity(map, (Vector(3) << 1, 0, 2).finished());
  EXPECT_EQ(z, (Vector(3) << 1, 1, 4).finished());
  EXPECT_EQ(ogl::instantaneous_dissimilarity(map, Vector::Constant(3, -4.2)), Vector::Zero(3));
  EXPECT_THROW(ogl::instantaneous_dissimilarity(map, Vector::Zero(2)), std::invalid_argument);
}

TEST(InstantaneousDissimilarity, BatchSumMatchesPairwiseDistances) {
  std::mt19937_64 rng(11);
  const std::size_t n = 6, p = 40;
  const DegreeMap map(n);
  oracle::Mat x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));  // columns are signals
  for (Eigen::Index k = 0; k < x.cols(); ++k) x.col(k) = oracle::random_vector(rng, 6, -1, 1);

  Vector z = Vector::Zero(static_cast<Eigen::Index>(map.slots()));
  for (Eigen::Index k = 0; k < x.cols(); ++k) z += ogl::instantaneous_dissimilarity(map, x.col(k));
  const auto pairs = oracle::enumerate_pairs(n);
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    const double dense = (x.row(static_cast<Eigen::Index>(pairs[e].first)) -
                          x.row(static_cast<Eigen::Index>(pairs[e].second))).squaredNorm();
    EXPECT_NEAR(z[static_cast<Eigen::Index>(e)], dense, 1e-12);
  }

  // sum_k TV(x_k) = tr(X^T L X) = 1/2 ||Z o W||_{1,1} = z^T w.
  const Vector w = oracle::random_vector(rng, static_cast<Eigen::Index>(map.slots()), 0, 1);
  double tv_sum = 0.0;
  for (Eigen::Index k = 0; k < x.cols(); ++k) tv_sum += ogl::total_variation(map, w, x.col(k));
  const double trace = (x.transpose() * ogl::laplacian(map.indexing(), w) * x).trace();
  oracle::Mat zmat = oracle::Mat::Zero(6, 6);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) zmat(i, j) = (x.row(i) - x.row(j)).squaredNorm();
  const double half_l11 = 0.5 * zmat.cwiseProduct(oracle::dense_adjacency(n, w)).cwiseAbs().sum();
  EXPECT_NEAR(tv_sum, trace, 1e-8);
  EXPECT_NEAR(tv_sum, half_l11, 1e-8);
  EXPECT_NEAR(tv_sum, z.dot(w), 1e-8);
}

TEST(ForgettingSchedule, ParseAndGamma) {
  EXPECT_EQ(ForgettingSchedule::parse("stationary").mode, ForgettingSchedule::Mode::stationary);
  const auto dyn = ForgettingSchedule::parse("fixed:0.002");
  EXPECT_EQ(dyn.mode, ForgettingSchedule::Mode::dynamic);
  EXPECT_DOUBLE_EQ(dyn.fixed_gamma, 2e-3);
  EXPECT_DOUBLE_EQ(dyn.gamma_at(17), 2e-3);
  EXPECT_DOUBLE_EQ(ForgettingSchedule::stationary().gamma_at(4), 0.25);
  EXPECT_EQ(ForgettingSchedule::parse(dyn.to_string()).fixed_gamma, dyn.fixed_gamma);
  EXPECT_THROW(ForgettingSchedule::parse("fixed:1.5"), std::invalid_argument);
  EXPECT_THROW(ForgettingSchedule::parse("fixed:0"), std::invalid_argument);
  EXPECT_THROW(ForgettingSchedule::parse("fixed:abc"), std::invalid_argument);
  EXPECT_THROW(ForgettingSchedule::parse("sliding"), std::invalid_argument);
  EXPECT_THROW(ForgettingSchedule::dynamic(1.0), std::invalid_argument);
}

TEST(DissimilarityState, StationaryFirstSampleAndMean) {
  DissimilarityState s(3, ForgettingSchedule::stationary());
  const Vector a = (Vector(3) << 1, 2, 3).finished();
  const Vector b = (Vector(3) << 3, 0, 5).finished();
  s.update(a);
  EXPECT_EQ(s.running(), a);
  EXPECT_EQ(s.steps(), 1u);
  s.update(b);
  EXPECT_LT((s.running() - (a + b) / 2).norm(), 1e-15);
}

TEST(DissimilarityState, DynamicSingleStep) {
  const DissimilarityState s(Vector::Ones(4), 5, ForgettingSchedule::dynamic(2e-3));
  const DissimilarityState next = s.updated(Vector::Zero(4));
  // Unrolled form: (1-g) * 1 + g * 0.
  const double unrolled = std::pow(1.0 - 2e-3, 1) * 1.0 + 2e-3 * 0.0;
  for (Eigen::Index e = 0; e < 4; ++e) {
    EXPECT_NEAR(next.running()[e], 0.998, 1e-15);
    EXPECT_NEAR(next.running()[e], unrolled, 1e-15);
  }
  EXPECT_EQ(s.running(), Vector::Ones(4));  // value form leaves the source untouched
}

TEST(DissimilarityState, DynamicFirstSampleSeeds) {
  DissimilarityState s(2, ForgettingSchedule::dynamic(0.1));
  s.update((Vector(2) << 4, 8).finished());
  EXPECT_EQ(s.running(), (Vector(2) << 4, 8).finished());
}

TEST(DissimilarityState, UpdateWithRunningValueIsIdempotent) {
  for (auto schedule : {ForgettingSchedule::stationary(), ForgettingSchedule::dynamic(0.3)}) {
    DissimilarityState s(Vector::Constant(3, 2.5), 7, schedule);
    s.update(Vector::Constant(3, 2.5));
    EXPECT_LT((s.running() - Vector::Constant(3, 2.5)).norm(), 1e-15);
  }
}

TEST(DissimilarityState, Errors) {
  DissimilarityState s(3, ForgettingSchedule::stationary());
  EXPECT_THROW(s.update(Vector::Zero(2)), std::invalid_argument);
  EXPECT_THROW(s.update((Vector(3) << 1, -1e-3, 0).finished()), std::invalid_argument);
  EXPECT_THROW(DissimilarityState(Vector::Constant(2, -1.0), 1, ForgettingSchedule::stationary()),
               std::invalid_argument);
}

TEST(DissimilarityState, StationaryEqualsBatchMean) {
  std::mt19937_64 rng(12);
  const Eigen::Index r = 15;
  DissimilarityState s(static_cast<std::size_t>(r), ForgettingSchedule::stationary());
  Vector sum = Vector::Zero(r);
  for (int k = 1; k <= 10000; ++k) {
    const Vector z = oracle::random_vector(rng, r, 0.0, 5.0);
    sum += z;
    s.update(z);
    if (k == 1 || k == 10 || k == 1000 || k == 10000) {
      const Vector mean = sum / k;
      EXPECT_LT(((s.running() - mean).array() / mean.array()).abs().maxCoeff(), 1e-9) << "k=" << k;
    }
  }
}

TEST(DissimilarityState, DynamicGeometricWeights) {
  std::mt19937_64 rng(13);
  const double gamma = 0.07;
  const Eigen::Index r = 6;
  DissimilarityState s(static_cast<std::size_t>(r), ForgettingSchedule::dynamic(gamma));
  std::vector<Vector> history;
  for (int k = 1; k <= 100; ++k) {
    history.push_back(oracle::random_vector(rng, r, 0.0, 3.0));
    s.update(history.back());
    // The seed sample carries (1-g)^(k-1); sample k-m carries g (1-g)^m.
    Vector unrolled = std::pow(1 - gamma, k - 1) * history.front();
    for (int m = 0; m < k - 1; ++m) unrolled += gamma * std::pow(1 - gamma, m) * history[static_cast<std::size_t>(k - 1 - m)];
    EXPECT_LT((s.running() - unrolled).lpNorm<Eigen::Infinity>(), 1e-12) << "k=" << k;
  }
}

TEST(DissimilarityState, ConvexCombinationBounds) {
  std::mt19937_64 rng(14);
  for (auto schedule : {ForgettingSchedule::stationary(), ForgettingSchedule::dynamic(0.2)}) {
    DissimilarityState s(8, schedule);
    for (int k = 0; k < 200; ++k) {
      const Vector prev = s.running();
      const Vector zbar = oracle::random_vector(rng, 8, 0.0, 4.0);
      s.update(zbar);
      if (k == 0) continue;
      for (Eigen::Index e = 0; e < 8; ++e) {
        EXPECT_GE(s.running()[e], std::min(prev[e], zbar[e]) - 1e-15);
        EXPECT_LE(s.running()[e], std::max(prev[e], zbar[e]) + 1e-15);
        EXPECT_GE(s.running()[e], 0.0);
      }
    }
  }
}

}  // namespace
