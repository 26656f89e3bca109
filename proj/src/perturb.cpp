// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/perturb.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tmd/error.hpp"

namespace tmd {
namespace {

constexpr double kSlack = 1e-9;

void require_sum_mode(const TmdConfig& cfg) {
  cfg.validate();
  if (cfg.mode != Aggregation::sum) {
    throw ConfigError("perturbation bounds are defined for sum mode only");
  }
}

std::vector<std::uint64_t> widths(const AttributedGraph& g, NodeId v,
                                  std::size_t L) {
  std::vector<std::uint64_t> out;
  std::vector<std::uint64_t> walks(g.node_count(), 0), next;
  walks[v] = 1;
  for (std::size_t level = 1; level <= L; ++level) {
    std::uint64_t total = 0;
    for (auto c : walks) total += c;
    out.push_back(total);
    next.assign(g.node_count(), 0);
    for (NodeId x = 0; x < g.node_count(); ++x) {
      if (walks[x] == 0) continue;
      for (NodeId y : g.neighbors(x)) next[y] += walks[x];
    }
    walks.swap(next);
  }
  return out;
}

void finish(PerturbationReport& r) {
  r.holds = r.exact_tmd <= r.bound + kSlack * std::max(1.0, r.bound);
}

}  // namespace

std::uint64_t tree_width(const AttributedGraph& g, NodeId v, std::size_t L,
                         std::size_t level) {
  if (v >= g.node_count()) throw std::out_of_range("node index out of range");
  if (level == 0 || level > L) {
    throw std::out_of_range("level " + std::to_string(level) +
                            " outside 1.." + std::to_string(L));
  }
  return widths(g, v, L)[level - 1];
}

PerturbationReport node_drop_bound(const AttributedGraph& g, NodeId v,
                                   const TmdConfig& cfg) {
  require_sum_mode(cfg);
  if (v >= g.node_count()) throw std::out_of_range("node index out of range");
  const std::size_t L = cfg.depth;
  PerturbationReport r;
  r.widths = widths(g, v, L);
  r.lambdas = level_coefficients(cfg.schedule, L);
  for (std::size_t l = 1; l <= L; ++l) {
    const double norm = tree_norm(g, v, L - l + 1, cfg);
    r.bound += r.lambdas[l - 1] * static_cast<double>(r.widths[l - 1]) * norm;
  }
  r.exact_tmd = tmd(g, drop_node(g, v), cfg);
  finish(r);
  return r;
}

PerturbationReport edge_drop_bound(const AttributedGraph& g, NodeId u,
                                   NodeId v, const TmdConfig& cfg) {
  require_sum_mode(cfg);
  if (!g.has_edge(u, v)) {
    throw std::invalid_argument("edge {" + std::to_string(u) + "," +
                                std::to_string(v) + "} is not in the graph");
  }
  const std::size_t L = cfg.depth;
  PerturbationReport r;
  const auto wv = widths(g, v, L);
  const auto wu = widths(g, u, L);
  r.widths = wv;
  r.widths.insert(r.widths.end(), wu.begin(), wu.end());
  r.lambdas = level_coefficients(cfg.schedule, L);
  for (std::size_t l = 1; l + 1 <= L; ++l) {
    const double nu = tree_norm(g, u, L - l, cfg);
    const double nv = tree_norm(g, v, L - l, cfg);
    r.bound += r.lambdas[l] * (static_cast<double>(wv[l - 1]) * nu +
                               static_cast<double>(wu[l - 1]) * nv);
  }
  r.exact_tmd = tmd(g, drop_edge(g, u, v), cfg);
  finish(r);
  return r;
}

PerturbationReport node_perturbation_bound(const AttributedGraph& g, NodeId v,
                                           std::span<const double> x_new,
                                           const TmdConfig& cfg) {
  require_sum_mode(cfg);
  const AttributedGraph edited = perturb_feature(g, v, x_new);
  const std::size_t L = cfg.depth;
  auto x = g.feature(v);
  double delta = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    delta += (x[i] - x_new[i]) * (x[i] - x_new[i]);
  }
  delta = std::sqrt(delta);
  PerturbationReport r;
  r.widths = widths(g, v, L);
  r.lambdas = level_coefficients(cfg.schedule, L);
  for (std::size_t l = 1; l <= L; ++l) {
    r.bound += r.lambdas[l - 1] * static_cast<double>(r.widths[l - 1]) * delta;
  }
  r.exact_tmd = tmd(g, edited, cfg);
  finish(r);
  return r;
}

PerturbationReport edit_sequence_bound(const AttributedGraph& g,
                                       std::span<const GraphEdit> edits,
                                       const TmdConfig& cfg) {
  require_sum_mode(cfg);
  PerturbationReport r;
  r.lambdas = level_coefficients(cfg.schedule, cfg.depth);
  AttributedGraph current = g;
  for (const auto& e : edits) {
    switch (e.kind) {
      case GraphEdit::Kind::drop_node:
        r.bound += node_drop_bound(current, e.u, cfg).bound;
        current = drop_node(current, e.u);
        break;
      case GraphEdit::Kind::drop_edge:
        r.bound += edge_drop_bound(current, e.u, e.v, cfg).bound;
        current = drop_edge(current, e.u, e.v);
        break;
      case GraphEdit::Kind::set_feature:
        r.bound += node_perturbation_bound(current, e.u, e.feature, cfg).bound;
        current = perturb_feature(current, e.u, e.feature);
        break;
    }
  }
  r.exact_tmd = tmd(g, current, cfg);
  finish(r);
  return r;
}

}  // namespace tmd
