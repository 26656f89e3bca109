// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tmd/ot.hpp"

namespace tmd {
namespace {

using testing::brute_force_assignment;
using testing::random_integer_matrix;
using testing::random_matrix;

Matrix from_rows(std::vector<std::vector<double>> rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

double flow_cost(const Matrix& c, const std::vector<FlowEntry>& flow) {
  double s = 0.0;
  for (const auto& f : flow) s += c(f.row, f.col) * f.mass;
  return s;
}

TEST(SolveAssignment, Examples) {
  auto p = solve_assignment(from_rows({{0, 1}, {1, 0}}));
  EXPECT_EQ(p.cost, 0.0);
  EXPECT_EQ(p.permutation(), (Permutation{0, 1}));
  auto q = solve_assignment(from_rows({{5}}));
  EXPECT_EQ(q.cost, 5.0);
  EXPECT_EQ(q.permutation(), (Permutation{0}));
  EXPECT_FALSE(q.normalized);
  auto e = solve_assignment(Matrix(0, 0));
  EXPECT_EQ(e.cost, 0.0);
  EXPECT_TRUE(e.permutation().empty());
}

TEST(SolveAssignment, RejectsBadInput) {
  EXPECT_THROW(solve_assignment(Matrix(2, 3)), std::invalid_argument);
  EXPECT_THROW(solve_assignment(from_rows({{-1}})), std::invalid_argument);
  EXPECT_THROW(solve_assignment(from_rows({{NAN}})), std::invalid_argument);
  EXPECT_THROW(solve_assignment(from_rows({{INFINITY}})), std::invalid_argument);
}

TEST(SolveAssignment, MatchesEnumerationOnRandom5x5) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 100; ++t) {
    auto c = random_matrix(5, 5, rng);
    auto [best, arg] = brute_force_assignment(c);
    auto plan = solve_assignment(c);
    EXPECT_NEAR(plan.cost, best, 1e-12 * (1 + best));
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += c(i, plan.permutation()[i]);
    EXPECT_EQ(s, plan.cost);
  }
}

TEST(SolveAssignment, LexicographicTieBreakOnIntegerCosts) {
  std::mt19937_64 rng(202);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 6;
    auto c = random_integer_matrix(n, n, rng, 3);
    auto [best, arg] = brute_force_assignment(c);
    auto plan = solve_assignment(c);
    EXPECT_EQ(plan.cost, best);
    EXPECT_EQ(plan.permutation(), arg);
  }
  // All-zero costs: every permutation is optimal.
  EXPECT_EQ(solve_assignment(Matrix(4, 4)).permutation(),
            (Permutation{0, 1, 2, 3}));
}

TEST(SolveAssignment, NoSampledPermutationIsCheaper) {
  std::mt19937_64 rng(303);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 3 + rng() % 10;
    auto c = random_matrix(n, n, rng);
    const double opt = solve_assignment(c).cost;
    for (int k = 0; k < 1000; ++k) {
      auto perm = testing::random_permutation(n, rng);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += c(i, perm[i]);
      ASSERT_LE(opt, s + 1e-12 * s);
    }
  }
}

TEST(AssignmentSolver, ReusableAndAgreesWithCanonicalSolve) {
  std::mt19937_64 rng(404);
  AssignmentSolver solver;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = rng() % 9;
    auto c = random_matrix(n, n, rng);
    const double fast = solver.min_cost(c.values(), n);
    EXPECT_NEAR(fast, solve_assignment(c).cost, 1e-12 * (1 + fast));
  }
}

TEST(SolveTransport, Examples) {
  const std::vector<double> one{1.0};
  auto p = solve_transport(from_rows({{2.5}}), one, one);
  EXPECT_EQ(p.cost, 2.5);
  ASSERT_EQ(p.flow().size(), 1u);

  auto c = from_rows({{0, 3, 4}, {3, 0, 5}, {4, 5, 0}});
  const std::vector<double> u(3, 1.0 / 3.0);
  EXPECT_EQ(solve_transport(c, u, u).cost, 0.0);

  EXPECT_THROW(solve_transport(c, std::vector<double>{1, 1, 1}, u),
               std::invalid_argument);
  EXPECT_THROW(solve_transport(c, std::vector<double>{-1, 1, 1},
                               std::vector<double>{0, 0, 1}),
               std::invalid_argument);
}

TEST(SolveTransport, MatchesVertexEnumeration2x3) {
  std::mt19937_64 rng(505);
  const std::vector<double> a{0.5, 0.5};
  const std::vector<double> b(3, 1.0 / 3.0);
  for (int t = 0; t < 200; ++t) {
    auto c = random_matrix(2, 3, rng);
    const double expect = testing::brute_force_transport_2x3(c, a, b);
    auto plan = solve_transport(c, a, b);
    EXPECT_NEAR(plan.cost, expect, 1e-12 * (1 + expect));
  }
}

TEST(SolveTransport, FlowRespectsMarginalsAndCost) {
  std::mt19937_64 rng(606);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + rng() % 8;
    const std::size_t n = 1 + rng() % 8;
    auto c = random_matrix(m, n, rng);
    std::vector<double> a(m), b(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    const double sa = std::accumulate(a.begin(), a.end(), 0.0);
    const double sb = std::accumulate(b.begin(), b.end(), 0.0);
    for (auto& x : b) x *= sa / sb;
    auto plan = solve_transport(c, a, b);
    std::vector<double> ra(m, 0.0), rb(n, 0.0);
    for (const auto& f : plan.flow()) {
      EXPECT_GT(f.mass, 0.0);
      ra[f.row] += f.mass;
      rb[f.col] += f.mass;
    }
    for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(ra[i], a[i], 1e-12);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(rb[j], b[j], 1e-12);
    EXPECT_NEAR(plan.cost, flow_cost(c, plan.flow()), 1e-12);
  }
}

TEST(SolveTransport, ReducesToAssignmentOnUniformSquare) {
  std::mt19937_64 rng(707);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 9;
    auto c = random_matrix(n, n, rng);
    const std::vector<double> u(n, 1.0 / static_cast<double>(n));
    const double w = solve_transport(c, u, u).cost;
    const double a = solve_assignment(c).cost / static_cast<double>(n);
    EXPECT_NEAR(w, a, 1e-9 * (1 + a));
  }
}

TEST(SolveTransport, DegenerateIntegerMasses) {
  // Masses that make the northwest-corner start degenerate.
  std::mt19937_64 rng(808);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + rng() % 7;
    const std::size_t n = 1 + rng() % 7;
    auto c = random_integer_matrix(m, n, rng, 4);
    const std::vector<double> a(m, static_cast<double>(n));
    const std::vector<double> b(n, static_cast<double>(m));
    const double w = solve_transport(c, a, b).cost;
    // Replicated assignment gives the same optimum.
    Matrix rep(m * n, m * n);
    for (std::size_t r = 0; r < m * n; ++r) {
      for (std::size_t s = 0; s < m * n; ++s) rep(r, s) = c(r / n, s / m);
    }
    EXPECT_EQ(w, solve_assignment(rep).cost);
  }
}

TEST(AugmentedOt, Examples) {
  auto zero = augmented_ot(from_rows({{0, 2}, {2, 0}}), std::vector<double>{1, 1},
                           std::vector<double>{1, 1}, false);
  EXPECT_EQ(zero.cost, 0.0);

  auto to_blanks = augmented_ot(Matrix(2, 0), std::vector<double>{1.5, 2.0},
                                std::vector<double>{}, false);
  EXPECT_EQ(to_blanks.cost, 3.5);

  auto padded = augmented_ot(from_rows({{1}, {1}}), std::vector<double>{2, 2},
                             std::vector<double>{0.5}, false);
  EXPECT_EQ(padded.cost, 3.0);

  auto norm = augmented_ot(from_rows({{1}, {1}}), std::vector<double>{2, 2},
                           std::vector<double>{0.5}, true);
  EXPECT_EQ(norm.cost, 1.5);
  EXPECT_TRUE(norm.normalized);

  EXPECT_THROW(augmented_ot(Matrix(2, 1), std::vector<double>{1},
                            std::vector<double>{1}, false),
               std::invalid_argument);
}

// Points in the plane with Euclidean ground cost; the origin is the blank.
struct PointSet {
  std::vector<std::array<double, 2>> pts;
};

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

double set_ot(const PointSet& x, const PointSet& y) {
  Matrix c(x.pts.size(), y.pts.size());
  std::vector<double> rn, cn;
  for (std::size_t i = 0; i < x.pts.size(); ++i) {
    rn.push_back(dist(x.pts[i], {0, 0}));
    for (std::size_t j = 0; j < y.pts.size(); ++j) c(i, j) = dist(x.pts[i], y.pts[j]);
  }
  for (const auto& p : y.pts) cn.push_back(dist(p, {0, 0}));
  return augmented_ot(c, rn, cn, false).cost;
}

PointSet random_points(std::mt19937_64& rng) {
  PointSet s;
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::size_t n = rng() % 6;
  for (std::size_t i = 0; i < n; ++i) s.pts.push_back({u(rng), u(rng)});
  return s;
}

TEST(AugmentedOt, MetricOverMultisets) {
  std::mt19937_64 rng(909);
  for (int t = 0; t < 300; ++t) {
    auto a = random_points(rng);
    auto b = random_points(rng);
    auto c = random_points(rng);
    const double ab = set_ot(a, b);
    EXPECT_NEAR(ab, set_ot(b, a), 1e-12 * (1 + ab));
    EXPECT_EQ(set_ot(a, a), 0.0);
    const double ac = set_ot(a, c);
    const double cb = set_ot(c, b);
    EXPECT_LE(ab, ac + cb + 1e-9 * std::max(1.0, ab));
  }
}

TEST(UniformOt, Cases) {
  // One point at 1 against two points at -1: W1 is 2.
  auto c = from_rows({{2, 2}});
  EXPECT_DOUBLE_EQ(uniform_ot(c, std::vector<double>{1}, std::vector<double>{1, 1}),
                   2.0);
  EXPECT_EQ(uniform_ot(Matrix(0, 2), {}, std::vector<double>{1, 3}), 2.0);
  EXPECT_EQ(uniform_ot(Matrix(0, 0), {}, {}), 0.0);
  std::mt19937_64 rng(1001);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 6;
    auto m = random_matrix(n, n, rng);
    std::vector<double> z(n, 0.0);
    EXPECT_NEAR(uniform_ot(m, z, z), solve_assignment(m).cost / n, 1e-12 * (1 + n));
  }
}

}  // namespace
}  // namespace tmd
