// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/tree_distance.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tmd/error.hpp"
#include "tmd/ot.hpp"

namespace tmd {

std::string to_string(Aggregation a) {
  return a == Aggregation::sum ? "sum" : "mean";
}

Aggregation parse_aggregation(const std::string& text) {
  if (text == "sum") return Aggregation::sum;
  if (text == "mean") return Aggregation::mean;
  throw ConfigError("unknown mode '" + text + "' (expected sum or mean)");
}

void TmdConfig::validate() const {
  if (depth == 0) throw ConfigError("depth must be at least 1");
  if (!schedule.covers(depth - 1)) {
    throw ConfigError("depth " + std::to_string(depth) + " needs w(1.." +
                      std::to_string(depth - 1) + ") but schedule " +
                      schedule.describe() + " stops at w(" +
                      std::to_string(schedule.defined_up_to()) + ")");
  }
}

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

// Distances between all depth-k trees of A and B, without the blank slot.
struct Level {
  Matrix core;
  std::vector<double> norms_a;
  std::vector<double> norms_b;
};

std::vector<double> root_norms(const AttributedGraph& g) {
  std::vector<double> out(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) out[v] = norm(g.feature(v));
  return out;
}

// Blank distances one level deeper: own feature norm plus the weighted sum
// (or mean) of the children's blank distances.
std::vector<double> next_norms(const AttributedGraph& g,
                               const std::vector<double>& roots,
                               const std::vector<double>& prev, double w,
                               Aggregation mode) {
  std::vector<double> out(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto nb = g.neighbors(v);
    double s = 0.0;
    for (NodeId u : nb) s += prev[u];
    if (mode == Aggregation::mean && !nb.empty()) {
      s /= static_cast<double>(nb.size());
    }
    out[v] = roots[v] + w * s;
  }
  return out;
}

class LevelBuilder {
 public:
  LevelBuilder(const AttributedGraph& ga, const AttributedGraph& gb,
               const TmdConfig& cfg)
      : ga_(ga), gb_(gb), cfg_(cfg), base_(ga.node_count(), gb.node_count()) {
    if (ga.feature_dim() != gb.feature_dim()) {
      throw ConfigError("feature dimensions differ: " +
                        std::to_string(ga.feature_dim()) + " vs " +
                        std::to_string(gb.feature_dim()));
    }
    for (NodeId u = 0; u < ga.node_count(); ++u) {
      for (NodeId v = 0; v < gb.node_count(); ++v) {
        base_(u, v) = euclidean(ga.feature(u), gb.feature(v));
      }
    }
    roots_a_ = root_norms(ga);
    roots_b_ = root_norms(gb);
  }

  Level first() const { return {base_, roots_a_, roots_b_}; }

  // Level k from level k-1.
  Level next(const Level& prev, std::size_t k) {
    const double w = cfg_.schedule.at(k - 1);
    Level out{Matrix(ga_.node_count(), gb_.node_count()),
              next_norms(ga_, roots_a_, prev.norms_a, w, cfg_.mode),
              next_norms(gb_, roots_b_, prev.norms_b, w, cfg_.mode)};
    for (NodeId u = 0; u < ga_.node_count(); ++u) {
      for (NodeId v = 0; v < gb_.node_count(); ++v) {
        out.core(u, v) = base_(u, v) + w * child_transport(prev, u, v);
      }
    }
    return out;
  }

 private:
  double child_transport(const Level& prev, NodeId u, NodeId v) {
    auto nu = ga_.neighbors(u);
    auto nv = gb_.neighbors(v);
    const std::size_t m = nu.size();
    const std::size_t n = nv.size();
    if (cfg_.mode == Aggregation::sum) {
      if (m == 0 && n == 0) return 0.0;
      if (m == 1 && n == 1) return prev.core(nu[0], nv[0]);
      const std::size_t size = std::max(m, n);
      buffer_.assign(size * size, 0.0);
      for (std::size_t i = 0; i < size; ++i) {
        double* row = buffer_.data() + i * size;
        for (std::size_t j = 0; j < size; ++j) {
          if (i < m && j < n) {
            row[j] = prev.core(nu[i], nv[j]);
          } else if (i < m) {
            row[j] = prev.norms_a[nu[i]];
          } else if (j < n) {
            row[j] = prev.norms_b[nv[j]];
          }
        }
      }
      return solver_.min_cost(buffer_, size);
    }

    Matrix block(m, n);
    std::vector<double> ra(m), rb(n);
    for (std::size_t i = 0; i < m; ++i) {
      ra[i] = prev.norms_a[nu[i]];
      for (std::size_t j = 0; j < n; ++j) block(i, j) = prev.core(nu[i], nv[j]);
    }
    for (std::size_t j = 0; j < n; ++j) rb[j] = prev.norms_b[nv[j]];
    return uniform_ot(block, ra, rb);
  }

  const AttributedGraph& ga_;
  const AttributedGraph& gb_;
  const TmdConfig& cfg_;
  Matrix base_;
  std::vector<double> roots_a_, roots_b_;
  std::vector<double> buffer_;
  AssignmentSolver solver_;
};

DistanceTable to_table(const Level& level, std::size_t depth) {
  const std::size_t na = level.norms_a.size();
  const std::size_t nb = level.norms_b.size();
  DistanceTable t{depth, Matrix(na + 1, nb + 1, 0.0), level.norms_a,
                  level.norms_b};
  for (std::size_t u = 0; u < na; ++u) {
    for (std::size_t v = 0; v < nb; ++v) t.dist(u, v) = level.core(u, v);
    t.dist(u, nb) = level.norms_a[u];
  }
  for (std::size_t v = 0; v < nb; ++v) t.dist(na, v) = level.norms_b[v];
  return t;
}

Level deepest_level(const AttributedGraph& ga, const AttributedGraph& gb,
                    const TmdConfig& cfg, std::size_t depth) {
  LevelBuilder builder(ga, gb, cfg);
  Level level = builder.first();
  for (std::size_t k = 2; k <= depth; ++k) level = builder.next(level, k);
  return level;
}

void check_node(const AttributedGraph& g, NodeId v) {
  if (v >= g.node_count()) {
    throw std::out_of_range("node " + std::to_string(v) +
                            " out of range for graph with " +
                            std::to_string(g.node_count()) + " nodes");
  }
}

}  // namespace

std::vector<DistanceTable> build_distance_tables(const AttributedGraph& ga,
                                                 const AttributedGraph& gb,
                                                 const TmdConfig& cfg) {
  cfg.validate();
  LevelBuilder builder(ga, gb, cfg);
  std::vector<DistanceTable> tables;
  tables.reserve(cfg.depth);
  Level level = builder.first();
  tables.push_back(to_table(level, 1));
  for (std::size_t k = 2; k <= cfg.depth; ++k) {
    level = builder.next(level, k);
    tables.push_back(to_table(level, k));
  }
  return tables;
}

double tree_distance(const AttributedGraph& ga, NodeId u,
                     const AttributedGraph& gb, NodeId v, std::size_t depth,
                     const TmdConfig& cfg) {
  TmdConfig at_depth = cfg;
  at_depth.depth = depth;
  at_depth.validate();
  check_node(ga, u);
  check_node(gb, v);
  return deepest_level(ga, gb, at_depth, depth).core(u, v);
}

std::vector<double> tree_norms(const AttributedGraph& g, std::size_t depth,
                               const TmdConfig& cfg) {
  TmdConfig at_depth = cfg;
  at_depth.depth = depth;
  at_depth.validate();
  const auto roots = root_norms(g);
  auto norms = roots;
  for (std::size_t k = 2; k <= depth; ++k) {
    norms = next_norms(g, roots, norms, cfg.schedule.at(k - 1), cfg.mode);
  }
  return norms;
}

double tree_norm(const AttributedGraph& g, NodeId v, std::size_t depth,
                 const TmdConfig& cfg) {
  check_node(g, v);
  return tree_norms(g, depth, cfg)[v];
}

double tmd(const AttributedGraph& ga, const AttributedGraph& gb,
           const TmdConfig& cfg) {
  cfg.validate();
  // Evaluating in a fixed argument order makes the result bitwise symmetric.
  if (canonical_less(gb, ga)) return tmd(gb, ga, cfg);
  const Level level = deepest_level(ga, gb, cfg, cfg.depth);
  if (cfg.mode == Aggregation::mean) {
    return uniform_ot(level.core, level.norms_a, level.norms_b);
  }
  const std::size_t m = ga.node_count();
  const std::size_t n = gb.node_count();
  const std::size_t size = std::max(m, n);
  std::vector<double> padded(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      double& cell = padded[i * size + j];
      if (i < m && j < n) {
        cell = level.core(i, j);
      } else if (i < m) {
        cell = level.norms_a[i];
      } else if (j < n) {
        cell = level.norms_b[j];
      }
    }
  }
  AssignmentSolver solver;
  return solver.min_cost(padded, size);
}

}  // namespace tmd
