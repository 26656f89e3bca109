// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tmd {

using NodeId = std::size_t;
using Feature = std::vector<double>;

// Unordered edge stored with first < second.
struct Edge {
  NodeId first = 0;
  NodeId second = 0;

  auto operator<=>(const Edge&) const = default;
};

// Undirected simple graph with one real feature vector per node.
//
// All feature vectors share the dimension `feature_dim() >= 1`; an empty graph
// still carries a dimension so that it can be compared against non-empty
// graphs of the same dataset. Instances are immutable; editors return copies.
class AttributedGraph {
 public:
  // Empty graph with scalar features.
  AttributedGraph() = default;

  // Empty graph with the given feature dimension.
  explicit AttributedGraph(std::size_t feature_dim);

  // Throws std::invalid_argument on ragged features, out-of-range endpoints,
  // self-loops or duplicate edges. `feature_dim` is only consulted when
  // `features` is empty.
  AttributedGraph(const std::vector<Feature>& features,
                  const std::vector<std::pair<NodeId, NodeId>>& edges,
                  std::size_t feature_dim = 1);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t feature_dim() const noexcept { return dim_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return node_count_ == 0; }

  std::span<const double> feature(NodeId v) const;
  std::span<const NodeId> neighbors(NodeId v) const;
  std::size_t degree(NodeId v) const { return neighbors(v).size(); }
  bool has_edge(NodeId u, NodeId v) const;

  // Sorted, each pair normalized to first < second.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::vector<Feature> features() const;

  bool operator==(const AttributedGraph& other) const;

 private:
  std::size_t dim_ = 1;
  std::size_t node_count_ = 0;
  std::vector<double> features_;
  std::vector<Edge> edges_;
  // CSR adjacency, neighbors sorted ascending.
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
};

struct GraphDataset {
  std::string name;
  std::vector<AttributedGraph> graphs;
  std::optional<std::vector<int>> labels;

  std::size_t size() const noexcept { return graphs.size(); }
  // Feature dimension shared by all graphs (1 for an empty dataset).
  std::size_t feature_dim() const noexcept;

  // Throws std::invalid_argument when labels are misaligned or graphs disagree
  // on feature dimension.
  void validate() const;

  bool operator==(const GraphDataset&) const = default;
};

// Perturbation editors.
AttributedGraph drop_node(const AttributedGraph& g, NodeId v);
AttributedGraph drop_edge(const AttributedGraph& g, NodeId u, NodeId v);
AttributedGraph perturb_feature(const AttributedGraph& g, NodeId v,
                                std::span<const double> x_new);
// perm[old] = new index.
AttributedGraph permute_nodes(const AttributedGraph& g,
                              std::span<const NodeId> perm);

// Erdos-Renyi edges, features i.i.d. uniform on [-1, 1]^p.
AttributedGraph random_graph(std::size_t n, double edge_prob,
                             std::size_t feature_dim, std::uint64_t seed);

// Small named constructions used by fixtures and tests. Features are all the
// scalar 1 unless given.
AttributedGraph cycle_graph(std::size_t n, std::size_t feature_dim = 1);
AttributedGraph path_graph(std::size_t n, std::size_t feature_dim = 1);
AttributedGraph complete_graph(std::size_t n, std::size_t feature_dim = 1);
AttributedGraph star_graph(std::size_t leaves, std::size_t feature_dim = 1);
AttributedGraph disjoint_union(const AttributedGraph& a,
                               const AttributedGraph& b);
AttributedGraph with_features(const AttributedGraph& g,
                              const std::vector<Feature>& features);
AttributedGraph scale_features(const AttributedGraph& g, double s);

// Total order used to make symmetric computations argument-order independent.
bool canonical_less(const AttributedGraph& a, const AttributedGraph& b);

// Nodes whose feature vector is exactly zero. Such nodes are
// indistinguishable from blank trees at depth one.
std::vector<NodeId> zero_feature_nodes(const AttributedGraph& g);

}  // namespace tmd
