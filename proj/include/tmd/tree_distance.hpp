// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tmd/graph.hpp"
#include "tmd/matrix.hpp"
#include "tmd/weights.hpp"

namespace tmd {

// sum: unnormalized OT with blank padding, size-sensitive.
// mean: Wasserstein-1 between uniform distributions over children (and over
// nodes at the graph level); matches mean-aggregating networks.
enum class Aggregation { sum, mean };

std::string to_string(Aggregation a);
// Throws ConfigError on anything but "sum" or "mean".
Aggregation parse_aggregation(const std::string& text);

struct TmdConfig {
  std::size_t depth = 1;
  WeightSchedule schedule;
  Aggregation mode = Aggregation::sum;

  // Throws ConfigError when depth is 0 or the schedule misses w(1..depth-1).
  void validate() const;
  bool operator==(const TmdConfig&) const = default;
};

// Tree distances between every depth-k computation tree of graph A (rows) and
// of graph B (columns). The last row and column hold distances to the blank
// tree, so dist(na, nb) == 0 and dist(u, nb) == norms_a[u].
struct DistanceTable {
  std::size_t depth = 0;
  Matrix dist;
  std::vector<double> norms_a;
  std::vector<double> norms_b;
};

// Tables for depths 1..cfg.depth, built level by level.
std::vector<DistanceTable> build_distance_tables(const AttributedGraph& ga,
                                                 const AttributedGraph& gb,
                                                 const TmdConfig& cfg);

// Distance between the depth-`depth` computation trees rooted at u in ga and
// at v in gb. Uses cfg's schedule and mode; cfg.depth is ignored.
double tree_distance(const AttributedGraph& ga, NodeId u,
                     const AttributedGraph& gb, NodeId v, std::size_t depth,
                     const TmdConfig& cfg);

// Distance from each depth-`depth` computation tree of g to the blank tree.
std::vector<double> tree_norms(const AttributedGraph& g, std::size_t depth,
                               const TmdConfig& cfg);
double tree_norm(const AttributedGraph& g, NodeId v, std::size_t depth,
                 const TmdConfig& cfg);

// Tree Mover's Distance: transport between the multisets of depth-L
// computation trees of the two graphs. Exactly symmetric, zero on identical
// inputs, and zero for two empty graphs.
double tmd(const AttributedGraph& ga, const AttributedGraph& gb,
           const TmdConfig& cfg);

}  // namespace tmd
