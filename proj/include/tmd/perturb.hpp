// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tmd/graph.hpp"
#include "tmd/tree_distance.hpp"

namespace tmd {

struct PerturbationReport {
  double bound = 0.0;
  double exact_tmd = 0.0;
  // Level widths of the computation tree(s) entering the bound. Edge drops
  // list the widths for v followed by those for u.
  std::vector<std::uint64_t> widths;
  std::vector<double> lambdas;
  bool holds = true;
};

// Number of vertices on level `level` (root = 1) of the depth-L computation
// tree of v, i.e. the number of walks of length level-1 starting at v.
std::uint64_t tree_width(const AttributedGraph& g, NodeId v, std::size_t L,
                         std::size_t level);

// Bounds on TMD(g, edited g) for single edits, each paired with the exact
// distance. Sum mode only; mean mode throws ConfigError.
PerturbationReport node_drop_bound(const AttributedGraph& g, NodeId v,
                                   const TmdConfig& cfg);
PerturbationReport edge_drop_bound(const AttributedGraph& g, NodeId u,
                                   NodeId v, const TmdConfig& cfg);
PerturbationReport node_perturbation_bound(const AttributedGraph& g, NodeId v,
                                           std::span<const double> x_new,
                                           const TmdConfig& cfg);

struct GraphEdit {
  enum class Kind { drop_node, drop_edge, set_feature };
  Kind kind = Kind::drop_node;
  NodeId u = 0;
  NodeId v = 0;     // second endpoint for drop_edge
  Feature feature;  // new feature for set_feature
};

// Several edits applied in order, each indexing the graph left by the previous
// ones (drop_node renumbers the nodes after u). The bound is the sum of the
// single-edit bounds along the sequence, which the triangle inequality turns
// into a bound on TMD(g, final graph).
PerturbationReport edit_sequence_bound(const AttributedGraph& g,
                                       std::span<const GraphEdit> edits,
                                       const TmdConfig& cfg);

}  // namespace tmd
