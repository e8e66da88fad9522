#include "ogl/graph.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using ogl::DegreeMap;
using ogl::EdgeIndexing;
using ogl::Vector;

TEST(EdgeIndexing, FirstAndLastSlot) {
  const EdgeIndexing idx(3);
  EXPECT_EQ(idx.slots(), 3u);
  EXPECT_EQ(idx.slot_of(0, 1), 0u);
  EXPECT_EQ(idx.slot_of(1, 2), 2u);
}

TEST(EdgeIndexing, MatchesLexicographicEnumeration) {
  const std::size_t n = 10;
  const EdgeIndexing idx(n);
  const auto pairs = oracle::enumerate_pairs(n);
  ASSERT_EQ(pairs.size(), idx.slots());
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    EXPECT_EQ(idx.slot_of(pairs[e].first, pairs[e].second), e);
    EXPECT_EQ(idx.pair_of(e), pairs[e]);
  }
  const std::size_t slot = idx.slot_of(2, 5);
  EXPECT_EQ(pairs[slot], std::make_pair(std::size_t{2}, std::size_t{5}));
}

TEST(EdgeIndexing, RejectsBadPairs) {
  const EdgeIndexing idx(4);
  EXPECT_THROW(idx.slot_of(2, 2), std::invalid_argument);
  EXPECT_THROW(idx.slot_of(3, 1), std::invalid_argument);
  EXPECT_THROW(idx.slot_of(1, 4), std::invalid_argument);
  EXPECT_THROW(idx.pair_of(6), std::out_of_range);
  EXPECT_THROW(EdgeIndexing(1), std::invalid_argument);
}

TEST(EdgeIndexing, NodesFromSlots) {
  EXPECT_EQ(EdgeIndexing::nodes_for_slots(1), 2u);
  EXPECT_EQ(EdgeIndexing::nodes_for_slots(190), 20u);
  EXPECT_THROW(EdgeIndexing::nodes_for_slots(4), std::invalid_argument);
}

TEST(Degree, TriangleAndEmpty) {
  const DegreeMap map(3);
  EXPECT_EQ(ogl::degree(map, Vector::Ones(3)), Vector::Constant(3, 2.0));
  EXPECT_EQ(ogl::degree(map, Vector::Zero(3)), Vector::Zero(3));
}

TEST(Degree, MatchesDenseRowSums) {
  std::mt19937_64 rng(1);
  const DegreeMap map(4);
  const Vector w = oracle::random_vector(rng, 6, 0.0, 2.0);
  const Vector rows = oracle::dense_adjacency(4, w).rowwise().sum();
  EXPECT_LT((ogl::degree(map, w) - rows).norm(), 1e-14);
  EXPECT_THROW(ogl::degree(map, Vector::Zero(5)), std::invalid_argument);
}

TEST(DegreeAdjoint, Examples) {
  const DegreeMap map(3);
  EXPECT_EQ(ogl::degree_adjoint(map, Vector::Unit(3, 0)), (Vector(3) << 1, 1, 0).finished());
  EXPECT_EQ(ogl::degree_adjoint(map, Vector::Ones(3)), Vector::Constant(3, 2.0));
  EXPECT_THROW(ogl::degree_adjoint(map, Vector::Zero(4)), std::invalid_argument);
}

TEST(DegreeAdjoint, MatchesDenseTranspose) {
  std::mt19937_64 rng(2);
  const DegreeMap map(5);
  const Vector u = oracle::random_vector(rng, 5, -1.0, 1.0);
  const Vector dense = oracle::dense_degree_map(5).transpose() * u;
  EXPECT_LT((ogl::degree_adjoint(map, u) - dense).norm(), 1e-14);
}

TEST(DegreeMap, AdjointnessProperty) {
  std::mt19937_64 rng(3);
  for (std::size_t n = 2; n <= 12; ++n) {
    const DegreeMap map(n);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector w = oracle::random_vector(rng, static_cast<Eigen::Index>(map.slots()), -1.0, 1.0);
      const Vector u = oracle::random_vector(rng, static_cast<Eigen::Index>(n), -1.0, 1.0);
      EXPECT_NEAR(map.apply(w).dot(u), w.dot(map.adjoint(u)), 1e-10);
    }
  }
}

TEST(DegreeMap, EachColumnHasTwoOnes) {
  const DegreeMap map(7);
  for (std::size_t e = 0; e < map.slots(); ++e) {
    Vector unit = Vector::Zero(static_cast<Eigen::Index>(map.slots()));
    unit[static_cast<Eigen::Index>(e)] = 1.0;
    const Vector col = map.apply(unit);
    EXPECT_EQ(col.sum(), 2.0);
    EXPECT_EQ(col.maxCoeff(), 1.0);
  }
}

TEST(DegreeMap, OperatorNormIsTwiceNMinusOne) {
  for (std::size_t n = 3; n <= 50; ++n) {
    const DegreeMap map(n);
    const double expected = 2.0 * static_cast<double>(n - 1);
    EXPECT_NEAR(ogl::estimate_operator_norm_squared(map) / expected, 1.0, 1e-6) << "n=" << n;
    EXPECT_EQ(map.norm_squared(), expected);
  }
  // Dense cross-check on a small case.
  const oracle::Mat s = oracle::dense_degree_map(6);
  const double top = Eigen::SelfAdjointEigenSolver<oracle::Mat>(s * s.transpose()).eigenvalues().maxCoeff();
  EXPECT_NEAR(top, 10.0, 1e-10);
}

TEST(Laplacian, SingleEdge) {
  const ogl::Matrix lap = ogl::laplacian(EdgeIndexing(2), Vector::Ones(1));
  EXPECT_EQ(lap, (ogl::Matrix(2, 2) << 1, -1, -1, 1).finished());
}

TEST(Laplacian, StructuralProperties) {
  std::mt19937_64 rng(4);
  for (std::size_t n : {3u, 6u, 9u}) {
    const EdgeIndexing idx(n);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector w = oracle::random_vector(rng, static_cast<Eigen::Index>(idx.slots()), 0.0, 3.0);
      const ogl::Matrix lap = ogl::laplacian(idx, w);
      EXPECT_LT((lap - lap.transpose()).norm(), 1e-15);
      EXPECT_LT((lap * Vector::Ones(static_cast<Eigen::Index>(n))).norm(), 1e-12);
      for (Eigen::Index i = 0; i < lap.rows(); ++i)
        for (Eigen::Index j = 0; j < lap.cols(); ++j)
          if (i != j) EXPECT_LE(lap(i, j), 0.0);
      const double smallest = Eigen::SelfAdjointEigenSolver<ogl::Matrix>(lap).eigenvalues().minCoeff();
      EXPECT_GE(smallest, -1e-10);
    }
  }
}

TEST(TotalVariation, Examples) {
  const DegreeMap map2(2);
  EXPECT_DOUBLE_EQ(ogl::total_variation(map2, Vector::Ones(1), (Vector(2) << 1, 0).finished()), 1.0);
  const DegreeMap map5(5);
  EXPECT_EQ(ogl::total_variation(map5, Vector::Constant(10, 0.7), Vector::Constant(5, 3.0)), 0.0);
  EXPECT_THROW(ogl::total_variation(map5, Vector::Zero(10), Vector::Zero(4)), std::invalid_argument);
}

TEST(TotalVariation, BothFormulasAgree) {
  std::mt19937_64 rng(5);
  const std::size_t n = 8;
  const DegreeMap map(n);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector w = oracle::random_vector(rng, 28, 0.0, 1.0);
    const Vector x = oracle::random_vector(rng, 8, -2.0, 2.0);
    const oracle::Mat adj = oracle::dense_adjacency(n, w);
    double half_sum = 0.0;
    for (Eigen::Index i = 0; i < 8; ++i)
      for (Eigen::Index j = 0; j < 8; ++j)
        if (i != j) half_sum += 0.5 * adj(i, j) * (x[i] - x[j]) * (x[i] - x[j]);
    const double quadratic = x.dot(ogl::laplacian(map.indexing(), w) * x);
    EXPECT_NEAR(half_sum, quadratic, 1e-10);
    EXPECT_NEAR(ogl::total_variation(map, w, x), quadratic, 1e-10);
  }
}

TEST(EdgeCount, Threshold) {
  const Vector w = (Vector(3) << 0.0, 0.5, 2.0).finished();
  EXPECT_EQ(ogl::edge_count(w), 2u);
  EXPECT_EQ(ogl::edge_count(w, 1.0), 1u);
}

}  // namespace
