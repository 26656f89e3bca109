// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tmd/error.hpp"
#include "tmd/naive.hpp"
#include "tmd/tree_distance.hpp"

namespace tmd {
namespace {

using testing::load_fixture;
using testing::rel_gap;

TmdConfig ones(std::size_t depth, Aggregation mode = Aggregation::sum) {
  return TmdConfig{depth, constant_weights(1.0), mode};
}

AttributedGraph single(Feature x) { return AttributedGraph({std::move(x)}, {}); }

TEST(TreeDistance, DepthOneIsFeatureDistance) {
  auto g = random_graph(5, 0.5, 3, 7);
  for (NodeId u = 0; u < 5; ++u) {
    for (NodeId v = 0; v < 5; ++v) {
      double s = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        const double d = g.feature(u)[i] - g.feature(v)[i];
        s += d * d;
      }
      EXPECT_DOUBLE_EQ(tree_distance(g, u, g, v, 1, ones(1)), std::sqrt(s));
    }
    EXPECT_EQ(tree_distance(g, u, g, u, 3, ones(3)), 0.0);
  }
}

TEST(TreeDistance, PathCenterVersusLeaf) {
  auto p3 = load_fixture("p3.json");
  EXPECT_EQ(tree_distance(p3, 1, p3, 0, 2, ones(2)), 1.0);
  auto a = computation_tree(p3, 1, 2);
  auto b = computation_tree(p3, 0, 2);
  EXPECT_EQ(naive_tree_distance(a, b, 2, ones(2)), 1.0);
}

TEST(TreeNorm, Examples) {
  auto iso = single({3.0, 4.0});
  for (std::size_t d = 1; d <= 4; ++d) EXPECT_EQ(tree_norm(iso, 0, d, ones(d)), 5.0);
  auto edge = load_fixture("edge.json");
  EXPECT_EQ(tree_norm(edge, 0, 2, ones(2)), 2.0);
  EXPECT_EQ(tree_norm(single({0.0}), 0, 3, ones(3)), 0.0);
  // With unit features and weights the norm counts the vertices of the tree.
  auto p3 = load_fixture("p3.json");
  EXPECT_EQ(tree_norms(p3, 3, ones(3)), (std::vector<double>{4, 5, 4}));
}

TEST(DistanceTables, Structure) {
  auto g = random_graph(6, 0.4, 2, 3);
  auto tables = build_distance_tables(g, g, ones(4));
  ASSERT_EQ(tables.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& t = tables[k];
    EXPECT_EQ(t.depth, k + 1);
    ASSERT_EQ(t.dist.rows(), 7u);
    ASSERT_EQ(t.dist.cols(), 7u);
    EXPECT_EQ(t.dist(6, 6), 0.0);
    for (NodeId v = 0; v < 6; ++v) {
      EXPECT_EQ(t.dist(v, v), 0.0);
      EXPECT_EQ(t.dist(v, 6), t.norms_a[v]);
      EXPECT_EQ(t.dist(6, v), t.norms_b[v]);
    }
  }
  auto x = single({1.0, 2.0});
  auto y = single({-1.0, 0.5});
  for (const auto& t : build_distance_tables(x, y, ones(5))) {
    EXPECT_DOUBLE_EQ(t.dist(0, 0), std::hypot(2.0, 1.5));
  }
}

TEST(Tmd, HandDerivedValues) {
  auto edge = load_fixture("edge.json");
  auto node = load_fixture("single_node.json");
  EXPECT_EQ(tmd(edge, node, ones(2)), 3.0);
  EXPECT_EQ(tmd(node, edge, ones(2)), 3.0);
  EXPECT_EQ(naive_tmd(edge, node, ones(2)), 3.0);

  for (std::size_t L = 1; L <= 4; ++L) {
    EXPECT_DOUBLE_EQ(tmd(single({1, 0}), single({0, 1}), ones(L)), std::sqrt(2.0));
  }

  auto c3c3 = load_fixture("c3c3.json");
  auto c6 = load_fixture("c6.json");
  for (std::size_t L = 1; L <= 5; ++L) {
    EXPECT_EQ(tmd(c3c3, c6, ones(L)), 0.0);
    EXPECT_EQ(tmd(c3c3, c6, ones(L, Aggregation::mean)), 0.0);
  }
  EXPECT_EQ(naive_tmd(c3c3, c6, ones(3)), 0.0);

  EXPECT_EQ(tmd(AttributedGraph(), AttributedGraph(), ones(3)), 0.0);
  EXPECT_EQ(tmd(edge, AttributedGraph(), ones(2)), 4.0);
}

TEST(Tmd, MeanModeEqualSizesIsScaledSumAtDepthOne) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng() % 7;
    auto a = random_graph(n, 0.5, 2, rng());
    auto b = random_graph(n, 0.5, 2, rng());
    const double s = tmd(a, b, ones(1));
    const double m = tmd(a, b, ones(1, Aggregation::mean));
    EXPECT_NEAR(m, s / static_cast<double>(n), 1e-12 * (1 + s));
  }
}

TEST(Tmd, RejectsBadConfig) {
  auto g = load_fixture("edge.json");
  EXPECT_THROW(tmd(g, g, TmdConfig{0, constant_weights(1), Aggregation::sum}),
               ConfigError);
  EXPECT_THROW(tmd(g, g, TmdConfig{4, pascal_weights(2), Aggregation::sum}),
               ConfigError);
  EXPECT_NO_THROW(tmd(g, g, TmdConfig{3, pascal_weights(2), Aggregation::sum}));
  auto wide = random_graph(2, 1.0, 2, 1);
  EXPECT_THROW(tmd(g, wide, ones(2)), ConfigError);
  EXPECT_EQ(parse_aggregation("mean"), Aggregation::mean);
  EXPECT_THROW(parse_aggregation("max"), ConfigError);
}

struct Case {
  Aggregation mode;
  bool pascal;
};

class TmdProperties : public ::testing::TestWithParam<Case> {
 protected:
  TmdConfig config(std::size_t L) const {
    const auto& c = GetParam();
    return TmdConfig{L, c.pascal ? pascal_weights(L, 0.7) : constant_weights(0.5),
                     c.mode};
  }
};

TEST_P(TmdProperties, AgreesWithNaiveOracle) {
  std::mt19937_64 rng(23 + static_cast<int>(GetParam().mode) * 2 + GetParam().pascal);
  for (int t = 0; t < 25; ++t) {
    const std::size_t L = 1 + rng() % 4;
    auto a = testing::random_small_graph(rng, 6, 1 + rng() % 3);
    auto b = random_graph(rng() % 7, 0.4, a.feature_dim(), rng());
    const auto cfg = config(L);
    const double fast = tmd(a, b, cfg);
    const double slow = naive_tmd(a, b, cfg);
    EXPECT_LE(rel_gap(fast, slow), 1e-9) << "L=" << L << " " << fast << " " << slow;
  }
}

TEST_P(TmdProperties, Pseudometric) {
  std::mt19937_64 rng(31 + static_cast<int>(GetParam().mode) * 2 + GetParam().pascal);
  for (int t = 0; t < 30; ++t) {
    const std::size_t L = 1 + rng() % 4;
    const std::size_t dim = 1 + rng() % 3;
    auto a = testing::random_small_graph(rng, 9, dim);
    auto b = testing::random_small_graph(rng, 9, dim);
    auto c = testing::random_small_graph(rng, 9, dim);
    const auto cfg = config(L);
    const double ab = tmd(a, b, cfg);
    EXPECT_EQ(tmd(a, a, cfg), 0.0);
    EXPECT_EQ(ab, tmd(b, a, cfg));
    EXPECT_GE(ab, 0.0);
    const double bound = tmd(a, c, cfg) + tmd(c, b, cfg);
    EXPECT_LE(ab, bound + 1e-9 * std::max(1.0, ab));
  }
}

TEST_P(TmdProperties, PermutationInvariant) {
  std::mt19937_64 rng(37 + static_cast<int>(GetParam().mode) * 2 + GetParam().pascal);
  for (int t = 0; t < 20; ++t) {
    const std::size_t L = 1 + rng() % 4;
    auto a = testing::random_small_graph(rng, 9, 2);
    auto b = testing::random_small_graph(rng, 9, 2);
    auto pa = permute_nodes(a, testing::random_permutation(a.node_count(), rng));
    const auto cfg = config(L);
    EXPECT_EQ(tmd(a, pa, cfg), 0.0);
    EXPECT_LE(rel_gap(tmd(a, b, cfg), tmd(pa, b, cfg)), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(
    Modes, TmdProperties,
    ::testing::Values(Case{Aggregation::sum, false}, Case{Aggregation::sum, true},
                      Case{Aggregation::mean, false}, Case{Aggregation::mean, true}),
    [](const auto& info) {
      return to_string(info.param.mode) + (info.param.pascal ? "Pascal" : "Constant");
    });

TEST(Tmd, NonDecreasingInDepthWithUnitWeights) {
  // Deeper trees only add non-negative terms when no weight shrinks them.
  std::mt19937_64 rng(41);
  for (int t = 0; t < 30; ++t) {
    auto a = testing::random_small_graph(rng, 8, 2);
    auto b = testing::random_small_graph(rng, 8, 2);
    double prev = 0.0;
    for (std::size_t L = 1; L <= 4; ++L) {
      const double d = tmd(a, b, ones(L));
      EXPECT_GE(d, prev - 1e-12 * (1 + d));
      prev = d;
    }
  }
}

TEST(Tmd, HomogeneousInFeatureScale) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 30; ++t) {
    auto a = testing::random_small_graph(rng, 8, 2);
    auto b = testing::random_small_graph(rng, 8, 2);
    const auto cfg = t % 2 ? ones(3) : ones(3, Aggregation::mean);
    const double d = tmd(a, b, cfg);
    // Powers of two rescale every intermediate exactly.
    EXPECT_EQ(tmd(scale_features(a, 4.0), scale_features(b, 4.0), cfg), 4.0 * d);
    EXPECT_EQ(tmd(scale_features(a, 0.5), scale_features(b, 0.5), cfg), 0.5 * d);
    EXPECT_LE(rel_gap(tmd(scale_features(a, 1.7), scale_features(b, 1.7), cfg), 1.7 * d),
              1e-12);
    EXPECT_EQ(tmd(scale_features(a, 0.0), scale_features(b, 0.0), cfg), 0.0);
  }
}

TEST(NaiveTmd, GuardsSize) {
  auto big = cycle_graph(11);
  EXPECT_THROW(naive_tmd(big, big, ones(2)), ConfigError);
  auto small = cycle_graph(4);
  EXPECT_THROW(naive_tmd(small, small, ones(5)), ConfigError);
}

TEST(ComputationTree, Shape) {
  auto star = star_graph(3);
  auto t = computation_tree(star, 0, 3);
  ASSERT_EQ(t.children.size(), 3u);
  for (const auto& c : t.children) {
    ASSERT_EQ(c.children.size(), 1u);
    EXPECT_TRUE(c.children[0].children.empty());
  }
}

}  // namespace
}  // namespace tmd
