// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/graph.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace tmd {
namespace {

std::string node_msg(NodeId v, std::size_t n) {
  return "node index " + std::to_string(v) + " out of range for graph with " +
         std::to_string(n) + " nodes";
}

}  // namespace

AttributedGraph::AttributedGraph(std::size_t feature_dim) : dim_(feature_dim) {
  if (dim_ == 0) throw std::invalid_argument("feature dimension must be >= 1");
}

AttributedGraph::AttributedGraph(
    const std::vector<Feature>& features,
    const std::vector<std::pair<NodeId, NodeId>>& edges,
    std::size_t feature_dim)
    : dim_(features.empty() ? feature_dim : features.front().size()),
      node_count_(features.size()) {
  if (dim_ == 0) throw std::invalid_argument("feature dimension must be >= 1");
  features_.reserve(node_count_ * dim_);
  for (const auto& x : features) {
    if (x.size() != dim_) {
      throw std::invalid_argument("feature vectors have differing dimensions");
    }
    features_.insert(features_.end(), x.begin(), x.end());
  }

  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= node_count_) throw std::invalid_argument(node_msg(u, node_count_));
    if (v >= node_count_) throw std::invalid_argument(node_msg(v, node_count_));
    if (u == v) {
      throw std::invalid_argument("self-loop at node " + std::to_string(u));
    }
    edges_.push_back({std::min(u, v), std::max(u, v)});
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate edge");
  }

  std::vector<std::size_t> degree(node_count_, 0);
  for (const auto& e : edges_) {
    ++degree[e.first];
    ++degree[e.second];
  }
  offsets_.assign(node_count_ + 1, 0);
  for (std::size_t v = 0; v < node_count_; ++v) {
    offsets_[v + 1] = offsets_[v] + degree[v];
  }
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[cursor[e.first]++] = e.second;
    adjacency_[cursor[e.second]++] = e.first;
  }
  for (std::size_t v = 0; v < node_count_; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

std::span<const double> AttributedGraph::feature(NodeId v) const {
  if (v >= node_count_) throw std::out_of_range(node_msg(v, node_count_));
  return {features_.data() + v * dim_, dim_};
}

std::span<const NodeId> AttributedGraph::neighbors(NodeId v) const {
  if (v >= node_count_) throw std::out_of_range(node_msg(v, node_count_));
  return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool AttributedGraph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count_ || v >= node_count_ || u == v) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Feature> AttributedGraph::features() const {
  std::vector<Feature> out;
  out.reserve(node_count_);
  for (std::size_t v = 0; v < node_count_; ++v) {
    auto x = feature(v);
    out.emplace_back(x.begin(), x.end());
  }
  return out;
}

bool AttributedGraph::operator==(const AttributedGraph& other) const {
  return dim_ == other.dim_ && node_count_ == other.node_count_ &&
         features_ == other.features_ && edges_ == other.edges_;
}

std::size_t GraphDataset::feature_dim() const noexcept {
  return graphs.empty() ? 1 : graphs.front().feature_dim();
}

void GraphDataset::validate() const {
  if (labels && labels->size() != graphs.size()) {
    throw std::invalid_argument("dataset '" + name + "' has " +
                                std::to_string(labels->size()) +
                                " labels for " + std::to_string(graphs.size()) +
                                " graphs");
  }
  for (const auto& g : graphs) {
    if (g.feature_dim() != feature_dim()) {
      throw std::invalid_argument("dataset '" + name +
                                  "' mixes feature dimensions");
    }
  }
}

namespace {

std::vector<std::pair<NodeId, NodeId>> edge_pairs(const AttributedGraph& g) {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) out.emplace_back(e.first, e.second);
  return out;
}

}  // namespace

AttributedGraph drop_node(const AttributedGraph& g, NodeId v) {
  if (v >= g.node_count()) {
    throw std::out_of_range(node_msg(v, g.node_count()));
  }
  std::vector<Feature> feats;
  feats.reserve(g.node_count() - 1);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (u == v) continue;
    auto x = g.feature(u);
    feats.emplace_back(x.begin(), x.end());
  }
  auto remap = [v](NodeId u) { return u > v ? u - 1 : u; };
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& e : g.edges()) {
    if (e.first == v || e.second == v) continue;
    edges.emplace_back(remap(e.first), remap(e.second));
  }
  return AttributedGraph(feats, edges, g.feature_dim());
}

AttributedGraph drop_edge(const AttributedGraph& g, NodeId u, NodeId v) {
  if (!g.has_edge(u, v)) {
    throw std::invalid_argument("edge {" + std::to_string(u) + "," +
                                std::to_string(v) + "} is not in the graph");
  }
  const Edge target{std::min(u, v), std::max(u, v)};
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& e : g.edges()) {
    if (e != target) edges.emplace_back(e.first, e.second);
  }
  return AttributedGraph(g.features(), edges, g.feature_dim());
}

AttributedGraph perturb_feature(const AttributedGraph& g, NodeId v,
                                std::span<const double> x_new) {
  if (v >= g.node_count()) {
    throw std::out_of_range(node_msg(v, g.node_count()));
  }
  if (x_new.size() != g.feature_dim()) {
    throw std::invalid_argument("replacement feature has dimension " +
                                std::to_string(x_new.size()) + ", expected " +
                                std::to_string(g.feature_dim()));
  }
  auto feats = g.features();
  feats[v].assign(x_new.begin(), x_new.end());
  return AttributedGraph(feats, edge_pairs(g), g.feature_dim());
}

AttributedGraph permute_nodes(const AttributedGraph& g,
                              std::span<const NodeId> perm) {
  const std::size_t n = g.node_count();
  if (perm.size() != n) throw std::invalid_argument("not a permutation");
  std::vector<bool> seen(n, false);
  for (NodeId p : perm) {
    if (p >= n || seen[p]) throw std::invalid_argument("not a permutation");
    seen[p] = true;
  }
  std::vector<Feature> feats(n);
  for (NodeId v = 0; v < n; ++v) {
    auto x = g.feature(v);
    feats[perm[v]].assign(x.begin(), x.end());
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    edges.emplace_back(perm[e.first], perm[e.second]);
  }
  return AttributedGraph(feats, edges, g.feature_dim());
}

AttributedGraph random_graph(std::size_t n, double edge_prob,
                             std::size_t feature_dim, std::uint64_t seed) {
  if (edge_prob < 0.0 || edge_prob > 1.0) {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<Feature> feats(n, Feature(feature_dim));
  for (auto& x : feats) {
    for (auto& c : x) c = coord(rng);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      // Draw unconditionally so the stream does not depend on edge_prob.
      const double r = unit(rng);
      if (r < edge_prob) edges.emplace_back(u, v);
    }
  }
  return AttributedGraph(feats, edges, feature_dim);
}

namespace {

std::vector<Feature> ones(std::size_t n, std::size_t dim) {
  return std::vector<Feature>(n, Feature(dim, 1.0));
}

}  // namespace

AttributedGraph cycle_graph(std::size_t n, std::size_t feature_dim) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  if (n >= 3) {
    for (NodeId v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  } else if (n == 2) {
    edges.emplace_back(0, 1);
  }
  return AttributedGraph(ones(n, feature_dim), edges, feature_dim);
}

AttributedGraph path_graph(std::size_t n, std::size_t feature_dim) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return AttributedGraph(ones(n, feature_dim), edges, feature_dim);
}

AttributedGraph complete_graph(std::size_t n, std::size_t feature_dim) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return AttributedGraph(ones(n, feature_dim), edges, feature_dim);
}

AttributedGraph star_graph(std::size_t leaves, std::size_t feature_dim) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return AttributedGraph(ones(leaves + 1, feature_dim), edges, feature_dim);
}

AttributedGraph disjoint_union(const AttributedGraph& a,
                               const AttributedGraph& b) {
  if (a.feature_dim() != b.feature_dim()) {
    throw std::invalid_argument("feature dimensions differ");
  }
  auto feats = a.features();
  auto fb = b.features();
  feats.insert(feats.end(), fb.begin(), fb.end());
  auto edges = edge_pairs(a);
  const std::size_t offset = a.node_count();
  for (const auto& e : b.edges()) {
    edges.emplace_back(e.first + offset, e.second + offset);
  }
  return AttributedGraph(feats, edges, a.feature_dim());
}

AttributedGraph with_features(const AttributedGraph& g,
                              const std::vector<Feature>& features) {
  if (features.size() != g.node_count()) {
    throw std::invalid_argument("feature count does not match node count");
  }
  return AttributedGraph(features, edge_pairs(g), g.feature_dim());
}

AttributedGraph scale_features(const AttributedGraph& g, double s) {
  auto feats = g.features();
  for (auto& x : feats) {
    for (auto& c : x) c *= s;
  }
  return AttributedGraph(feats, edge_pairs(g), g.feature_dim());
}

bool canonical_less(const AttributedGraph& a, const AttributedGraph& b) {
  if (a.node_count() != b.node_count()) return a.node_count() < b.node_count();
  if (a.feature_dim() != b.feature_dim()) {
    return a.feature_dim() < b.feature_dim();
  }
  for (NodeId v = 0; v < a.node_count(); ++v) {
    auto xa = a.feature(v);
    auto xb = b.feature(v);
    if (std::lexicographical_compare(xa.begin(), xa.end(), xb.begin(),
                                     xb.end())) {
      return true;
    }
    if (std::lexicographical_compare(xb.begin(), xb.end(), xa.begin(),
                                     xa.end())) {
      return false;
    }
  }
  return a.edges() < b.edges();
}

std::vector<NodeId> zero_feature_nodes(const AttributedGraph& g) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto x = g.feature(v);
    if (std::all_of(x.begin(), x.end(), [](double c) { return c == 0.0; })) {
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace tmd
