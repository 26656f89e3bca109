// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "test_util.hpp"
#include "tmd/error.hpp"
#include "tmd/gnn.hpp"

namespace tmd {
namespace {

using testing::load_fixture;

AffineMap identity(std::size_t d) {
  return {Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d)};
}

GinModel identity_model(std::size_t d, std::size_t layers, Aggregation agg) {
  GinModel m;
  m.aggregation = agg;
  for (std::size_t l = 0; l < layers; ++l) m.layers.push_back({identity(d), std::nullopt});
  m.readout = identity(d);
  m.finalize();
  return m;
}

double oracle_spectral_norm(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.transpose() * w);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

TEST(SpectralNorm, Examples) {
  EXPECT_DOUBLE_EQ(spectral_norm(Eigen::MatrixXd::Constant(1, 1, 2.0)), 2.0);
  EXPECT_EQ(spectral_norm(Eigen::MatrixXd::Zero(3, 3)), 0.0);
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(3, 3);
  diag.diagonal() << 1.0, -4.0, 2.0;
  EXPECT_NEAR(spectral_norm(diag), 4.0, 1e-9);
}

TEST(SpectralNorm, MatchesDenseEigensolver) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto m = random_gin(8, 8, 1, seed, Aggregation::sum);
    const auto& w = m.layers[0].phi.weight;
    EXPECT_NEAR(m.lipschitz[0], oracle_spectral_norm(w), 1e-6);
  }
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Random(1 + rng() % 9, 1 + rng() % 9);
    EXPECT_NEAR(spectral_norm(w), oracle_spectral_norm(w), 1e-6);
  }
}

TEST(RandomGin, DeterministicAndBiasFree) {
  auto a = random_gin(3, 5, 2, 42, Aggregation::sum);
  auto b = random_gin(3, 5, 2, 42, Aggregation::sum);
  EXPECT_EQ(model_to_json(a), model_to_json(b));
  EXPECT_TRUE(a.bias_free());
  EXPECT_EQ(a.lipschitz.size(), 3u);
  EXPECT_EQ(a.input_dim(), 3u);
  EXPECT_EQ(a.output_dim(), 1u);
  EXPECT_NE(model_to_json(a), model_to_json(random_gin(3, 5, 2, 43, Aggregation::sum)));
}

TEST(GinForward, HandComputed) {
  auto m1 = identity_model(2, 3, Aggregation::sum);
  AttributedGraph one({{0.5, 2.0}}, {});
  EXPECT_EQ(gin_forward(m1, one), Eigen::Vector2d(0.5, 2.0));

  AttributedGraph edge({{1.0, 2.0}, {3.0, 0.5}}, {{0, 1}});
  auto m = identity_model(2, 1, Aggregation::sum);
  EXPECT_EQ(gin_forward(m, edge), Eigen::Vector2d(8.0, 5.0));

  auto mean = identity_model(2, 1, Aggregation::mean);
  EXPECT_EQ(gin_forward(mean, edge), Eigen::Vector2d(4.0, 2.5));

  EXPECT_EQ(gin_forward(m, AttributedGraph(2)), Eigen::Vector2d::Zero());
  EXPECT_THROW(gin_forward(m, load_fixture("edge.json")), std::invalid_argument);
}

TEST(GinForward, PermutationInvariantBitwise) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    auto g = testing::random_small_graph(rng, 12, 3);
    auto m = random_gin(3, 6, 1 + rng() % 3, rng(),
                        rng() % 2 ? Aggregation::sum : Aggregation::mean);
    auto h = permute_nodes(g, testing::random_permutation(g.node_count(), rng));
    EXPECT_EQ(gin_forward(m, g), gin_forward(m, h));
  }
}

TEST(Lipschitz, IdenticalInputs) {
  auto m = random_gin(1, 4, 2, 3, Aggregation::sum);
  auto g = load_fixture("c6.json");
  auto r = lipschitz_check(m, g, g);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.certified);
  auto perm = permute_nodes(g, std::vector<std::size_t>{3, 1, 0, 5, 2, 4});
  auto p = lipschitz_check(m, g, perm);
  EXPECT_EQ(p.lhs, 0.0);
  EXPECT_EQ(p.rhs, 0.0);
  EXPECT_EQ(r.config.depth, 3u);
}

TEST(Lipschitz, BoundHoldsOnRandomModels) {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int t = 0; t < 240; ++t) {
    const std::size_t L = 1 + t % 3;
    const auto agg = t % 2 ? Aggregation::mean : Aggregation::sum;
    const double eps = std::uniform_real_distribution<double>(0.25, 2.0)(rng);
    auto m = random_gin(2, 4, L, rng(), agg, 2, eps);
    auto a = testing::random_small_graph(rng, 9, 2);
    auto b = testing::random_small_graph(rng, 9, 2);
    auto r = lipschitz_check(m, a, b);
    EXPECT_TRUE(r.holds) << "L=" << L << " " << r.lhs << " > " << r.rhs;
    worst = std::max(worst, r.ratio);
  }
  EXPECT_LE(worst, 1.0 + 1e-7);
}

TEST(Lipschitz, NeighborMapsUseMatchingWeights) {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 100; ++t) {
    const std::size_t L = 1 + t % 3;
    auto m = random_gin(2, 3, L, rng(), Aggregation::sum);
    for (auto& layer : m.layers) {
      const auto d = layer.phi.weight.cols();
      layer.neighbor = AffineMap{Eigen::MatrixXd::Random(d, d), Eigen::VectorXd::Zero(d)};
    }
    m.finalize();
    ASSERT_EQ(m.neighbor_lipschitz.size(), L);
    auto a = testing::random_small_graph(rng, 8, 2);
    auto b = testing::random_small_graph(rng, 8, 2);
    EXPECT_TRUE(lipschitz_check(m, a, b).holds);
  }
}

TEST(Lipschitz, ZeroDistanceMeansEqualOutputs) {
  auto a = load_fixture("c3c3.json");
  auto b = load_fixture("c6.json");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto m = random_gin(1, 5, 1 + seed % 4, seed,
                        seed % 2 ? Aggregation::mean : Aggregation::sum);
    auto r = lipschitz_check(m, a, b);
    EXPECT_EQ(r.tmd, 0.0);
    EXPECT_LE(r.lhs, 1e-7);
  }
}

TEST(Lipschitz, BiasesVoidTheCertificate) {
  auto m = identity_model(1, 1, Aggregation::sum);
  m.layers[0].phi.bias = Eigen::VectorXd::Constant(1, 1.0);
  m.finalize();
  // A zero-feature node is at distance 0 from the empty graph.
  AttributedGraph zero({{0.0}}, {});
  auto r = lipschitz_check(m, zero, AttributedGraph());
  EXPECT_EQ(r.tmd, 0.0);
  EXPECT_GT(r.lhs, 0.0);
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(r.certified);
}

TEST(Lipschitz, RejectsMismatchedConfig) {
  auto m = random_gin(1, 3, 2, 1, Aggregation::sum);
  auto g = load_fixture("edge.json");
  EXPECT_THROW(lipschitz_check(m, g, g, TmdConfig{2, pascal_weights(2), Aggregation::sum}),
               ConfigError);
  EXPECT_THROW(lipschitz_check(m, g, g, TmdConfig{3, pascal_weights(2), Aggregation::mean}),
               ConfigError);
  auto cfg = lipschitz_config(m);
  EXPECT_EQ(cfg.depth, 3u);
  EXPECT_EQ(cfg.schedule, pascal_weights(2, 1.0));
}

TEST(Stats, EmpiricalLipschitz) {
  EXPECT_EQ(empirical_lipschitz(std::vector<double>{1, 4, 9},
                                std::vector<double>{1, 2, 3}),
            3.0);
  EXPECT_EQ(empirical_lipschitz(std::vector<double>{0, 0}, std::vector<double>{1, 2}),
            0.0);
  std::vector<double> t{0.5, 1.5, 4.0}, h;
  for (double x : t) h.push_back(0.7 * x);
  EXPECT_DOUBLE_EQ(empirical_lipschitz(h, t), 0.7);
  EXPECT_THROW(empirical_lipschitz(std::vector<double>{1}, std::vector<double>{0}),
               std::invalid_argument);
}

TEST(Stats, Pearson) {
  EXPECT_DOUBLE_EQ(pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}), 1.0);
  EXPECT_DOUBLE_EQ(pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}), -1.0);
  EXPECT_DOUBLE_EQ(pearson_r(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}),
                   0.8);
  EXPECT_THROW(pearson_r(std::vector<double>{1, 1}, std::vector<double>{1, 2}),
               std::invalid_argument);
}

TEST(ModelJson, RoundTrip) {
  auto m = random_gin(2, 3, 2, 5, Aggregation::mean, 2, 0.5);
  m.layers[1].phi.bias << 0.1, -0.2, 0.3;
  m.finalize();
  auto back = model_from_json(model_to_json(m));
  EXPECT_EQ(model_to_json(back), model_to_json(m));
  EXPECT_FALSE(back.bias_free());
  EXPECT_THROW(model_from_json(nlohmann::json{{"layers", 3}}), ParseError);
}

}  // namespace
}  // namespace tmd
