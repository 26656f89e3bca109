// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "tmd/graph.hpp"
#include "tmd/tree_distance.hpp"

namespace tmd {

// Explicit rooted tree with a feature on every vertex.
struct FeatureTree {
  Feature root;
  std::vector<FeatureTree> children;
};

// Depth-`depth` computation tree of v: v's feature at the root and, when
// depth > 1, the depth-1 computation trees of its neighbors as children.
FeatureTree computation_tree(const AttributedGraph& g, NodeId v,
                             std::size_t depth);

// Tree distance by literal recursion over two explicit trees of the given
// depth, padding child multisets with materialized blank trees.
double naive_tree_distance(const FeatureTree& a, const FeatureTree& b,
                           std::size_t depth, const TmdConfig& cfg);

// TMD evaluated on materialized computation trees with no sharing between
// subproblems. Uses different OT routines than tmd() so the two can check each
// other. Exponential; throws ConfigError beyond 10 nodes per graph or depth 4.
double naive_tmd(const AttributedGraph& ga, const AttributedGraph& gb,
                 const TmdConfig& cfg);

}  // namespace tmd
