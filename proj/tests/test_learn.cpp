// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "tmd/learn.hpp"

namespace tmd {
namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix line_distances(const std::vector<double>& x) {
  Matrix m(x.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) m(i, j) = std::abs(x[i] - x[j]);
  }
  return m;
}

TEST(Knn, Examples) {
  EXPECT_EQ(knn_classify(std::vector<double>{0.3, 0.1}, std::vector<int>{0, 1}, 1), 1);
  EXPECT_EQ(knn_classify(std::vector<double>{0.3, 0.1, 5}, std::vector<int>{4, 4, 4}, 2), 4);
  EXPECT_EQ(knn_classify(std::vector<double>{0.1, 0.2, 0.9}, std::vector<int>{7, 7, 2}, 3), 7);
  // Label tie broken by the smaller summed distance, then the smaller label.
  EXPECT_EQ(knn_classify(std::vector<double>{0.2, 0.1}, std::vector<int>{0, 1}, 2), 1);
  EXPECT_EQ(knn_classify(std::vector<double>{0.1, 0.1}, std::vector<int>{5, 3}, 2), 3);
  // Equal distances rank by training index.
  EXPECT_EQ(knn_classify(std::vector<double>{1, 1}, std::vector<int>{8, 9}, 1), 8);
  EXPECT_THROW(knn_classify(std::vector<double>{1}, std::vector<int>{1}, 0),
               std::invalid_argument);
}

TEST(Knn, LeaveOneOut) {
  auto d = line_distances({0, 0.1, 0.2, 5, 5.1, 5.2});
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  EXPECT_EQ(knn_loo_accuracy(d, labels, 1), 1.0);
  const std::vector<int> swapped{0, 0, 1, 1, 1, 1};
  // Only the point at 0.2 is misclassified.
  EXPECT_DOUBLE_EQ(knn_loo_accuracy(d, swapped, 1), 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(majority_rate(swapped), 4.0 / 6.0);
}

TEST(Kmedoids, Examples) {
  auto d = line_distances({0, 1, 3, 7});
  auto all = kmedoids(d, 4, 1);
  EXPECT_EQ(all.cost, 0.0);
  auto sorted = all.medoids;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3}));

  auto one = kmedoids(d, 1, 1);
  ASSERT_EQ(one.medoids.size(), 1u);
  // Total distances: 11, 9, 9, 17; the first minimizer wins.
  EXPECT_EQ(one.cost, 9.0);
  EXPECT_TRUE(one.medoids[0] == 1 || one.medoids[0] == 2);
}

TEST(Kmedoids, SeparatedCliques) {
  const std::size_t n = 10;
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d(i, j) = i == j ? 0.0 : ((i < 4) == (j < 4) ? 0.1 : 10.0);
    }
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto c = kmedoids(d, 2, seed);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(c.assignment[i] == c.assignment[0], i < 4);
    }
    EXPECT_NEAR(c.cost, 0.1 * 8, 1e-12);
  }
}

TEST(Kmedoids, CostNeverIncreases) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> x(5 + rng() % 30);
    for (auto& v : x) v = u(rng);
    auto c = kmedoids(line_distances(x), 1 + rng() % 4, rng());
    for (std::size_t i = 1; i < c.cost_history.size(); ++i) {
      EXPECT_LE(c.cost_history[i], c.cost_history[i - 1]);
    }
    EXPECT_EQ(c.cost, c.cost_history.back());
  }
}

TEST(Nmi, Examples) {
  const std::vector<int> a{0, 0, 1, 1, 2, 2};
  EXPECT_DOUBLE_EQ(nmi(a, a), 1.0);
  EXPECT_DOUBLE_EQ(nmi(a, std::vector<int>{5, 5, 3, 3, 9, 9}), 1.0);
  EXPECT_EQ(nmi(std::vector<int>{1, 1}, std::vector<int>{2, 2}), 1.0);
  std::mt19937_64 rng(11);
  std::vector<int> t(10000), p(10000);
  for (auto& x : t) x = static_cast<int>(rng() % 2);
  for (auto& x : p) x = static_cast<int>(rng() % 3);
  EXPECT_LT(nmi(t, p), 0.02);
}

TEST(Nmi, HandComputed) {
  // true (0,0,1,1), pred (0,0,0,1): I = ln2 - 3/4 ln3 + ln2 ... computed below.
  const std::vector<int> t{0, 0, 1, 1}, p{0, 0, 0, 1};
  const double ht = std::log(2.0);
  const double hp = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  // Joint cells: (0,0)=2/4, (1,0)=1/4, (1,1)=1/4.
  const double hj = -(0.5 * std::log(0.5) + 2 * 0.25 * std::log(0.25));
  const double mi = ht + hp - hj;
  EXPECT_NEAR(nmi(t, p), mi / ((ht + hp) / 2), 1e-12);
  EXPECT_NEAR(completeness_score(t, p), mi / hp, 1e-12);
}

TEST(Completeness, Examples) {
  const std::vector<int> t{0, 0, 1, 1};
  EXPECT_EQ(completeness_score(t, std::vector<int>{3, 3, 3, 3}), 1.0);
  EXPECT_DOUBLE_EQ(completeness_score(t, t), 1.0);
  EXPECT_NEAR(completeness_score(t, std::vector<int>{0, 1, 0, 1}), 0.0, 1e-12);
}

}  // namespace
}  // namespace tmd
