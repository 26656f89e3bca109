// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/naive.hpp"

#include <cmath>

#include "tmd/error.hpp"
#include "tmd/ot.hpp"

namespace tmd {
namespace {

constexpr std::size_t kMaxNodes = 10;
constexpr std::size_t kMaxDepth = 4;

double feature_gap(const Feature& a, const Feature& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

FeatureTree blank_tree(std::size_t dim) { return {Feature(dim, 0.0), {}}; }

// Transport between two multisets of trees of the given depth.
double multiset_transport(const std::vector<FeatureTree>& xs,
                          const std::vector<FeatureTree>& ys,
                          std::size_t depth, std::size_t dim,
                          const TmdConfig& cfg) {
  if (cfg.mode == Aggregation::sum) {
    // Pad with blank trees and solve with unit masses on both sides.
    const std::size_t size = std::max(xs.size(), ys.size());
    if (size == 0) return 0.0;
    const FeatureTree blank = blank_tree(dim);
    CostMatrix c(size, size);
    for (std::size_t i = 0; i < size; ++i) {
      const FeatureTree& a = i < xs.size() ? xs[i] : blank;
      for (std::size_t j = 0; j < size; ++j) {
        const FeatureTree& b = j < ys.size() ? ys[j] : blank;
        c(i, j) = naive_tree_distance(a, b, depth, cfg);
      }
    }
    const std::vector<double> ones(size, 1.0);
    return solve_transport(c, ones, ones).cost;
  }

  // Uniform distributions; an empty multiset is a point mass on the blank.
  const std::vector<FeatureTree> only_blank{blank_tree(dim)};
  const auto& a = xs.empty() ? only_blank : xs;
  const auto& b = ys.empty() ? only_blank : ys;
  if (xs.empty() && ys.empty()) return 0.0;
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  CostMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c(i, j) = naive_tree_distance(a[i], b[j], depth, cfg);
    }
  }
  if (m == n) {
    const std::vector<double> unit(m, 1.0 / static_cast<double>(m));
    return solve_transport(c, unit, unit).cost;
  }
  // Replicating row i n times and column j m times turns the uniform problem
  // into an mn x mn assignment with cost mn times the W1 value.
  CostMatrix rep(m * n, m * n);
  for (std::size_t r = 0; r < m * n; ++r) {
    for (std::size_t s = 0; s < m * n; ++s) rep(r, s) = c(r / n, s / m);
  }
  return solve_assignment(rep).cost / static_cast<double>(m * n);
}

}  // namespace

FeatureTree computation_tree(const AttributedGraph& g, NodeId v,
                             std::size_t depth) {
  auto x = g.feature(v);
  FeatureTree t{Feature(x.begin(), x.end()), {}};
  if (depth > 1) {
    for (NodeId u : g.neighbors(v)) {
      t.children.push_back(computation_tree(g, u, depth - 1));
    }
  }
  return t;
}

double naive_tree_distance(const FeatureTree& a, const FeatureTree& b,
                           std::size_t depth, const TmdConfig& cfg) {
  const double root = feature_gap(a.root, b.root);
  if (depth <= 1) return root;
  return root + cfg.schedule.at(depth - 1) *
                    multiset_transport(a.children, b.children, depth - 1,
                                       a.root.size(), cfg);
}

double naive_tmd(const AttributedGraph& ga, const AttributedGraph& gb,
                 const TmdConfig& cfg) {
  cfg.validate();
  if (ga.node_count() > kMaxNodes || gb.node_count() > kMaxNodes ||
      cfg.depth > kMaxDepth) {
    throw ConfigError("naive evaluation is limited to 10 nodes and depth 4");
  }
  if (ga.feature_dim() != gb.feature_dim()) {
    throw ConfigError("feature dimensions differ");
  }
  std::vector<FeatureTree> ta, tb;
  for (NodeId v = 0; v < ga.node_count(); ++v) {
    ta.push_back(computation_tree(ga, v, cfg.depth));
  }
  for (NodeId v = 0; v < gb.node_count(); ++v) {
    tb.push_back(computation_tree(gb, v, cfg.depth));
  }
  return multiset_transport(ta, tb, cfg.depth, ga.feature_dim(), cfg);
}

}  // namespace tmd
