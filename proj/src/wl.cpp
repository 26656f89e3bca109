// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/wl.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace tmd {
namespace {

using Colors = std::vector<std::size_t>;

std::vector<std::size_t> histogram(const Colors& colors, std::size_t palette) {
  std::vector<std::size_t> h(palette, 0);
  for (std::size_t c : colors) ++h[c];
  return h;
}

}  // namespace

WlResult wl_refine(const AttributedGraph& ga, const AttributedGraph& gb,
                   std::size_t iterations) {
  const AttributedGraph* graphs[2] = {&ga, &gb};
  Colors colors[2];
  std::size_t palette = 0;
  {
    std::map<Feature, std::size_t> ids;
    for (int s = 0; s < 2; ++s) {
      const auto& g = *graphs[s];
      for (NodeId v = 0; v < g.node_count(); ++v) {
        auto x = g.feature(v);
        auto [it, inserted] = ids.emplace(Feature(x.begin(), x.end()), ids.size());
        colors[s].push_back(it->second);
      }
    }
    palette = ids.size();
  }
  if (ga.feature_dim() != gb.feature_dim() ||
      histogram(colors[0], palette) != histogram(colors[1], palette)) {
    return {true, 0};
  }

  for (std::size_t round = 1; round <= iterations; ++round) {
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> ids;
    Colors next[2];
    for (int s = 0; s < 2; ++s) {
      const auto& g = *graphs[s];
      for (NodeId v = 0; v < g.node_count(); ++v) {
        std::vector<std::size_t> around;
        for (NodeId u : g.neighbors(v)) around.push_back(colors[s][u]);
        std::sort(around.begin(), around.end());
        auto key = std::make_pair(colors[s][v], std::move(around));
        auto [it, inserted] = ids.emplace(std::move(key), ids.size());
        next[s].push_back(it->second);
      }
    }
    const std::size_t refined = ids.size();
    if (histogram(next[0], refined) != histogram(next[1], refined)) {
      return {true, round};
    }
    // Refinement only splits classes, so an unchanged class count means the
    // partition is stable and later rounds cannot separate the graphs.
    if (refined == palette) break;
    palette = refined;
    colors[0] = std::move(next[0]);
    colors[1] = std::move(next[1]);
  }
  return {false, std::nullopt};
}

}  // namespace tmd
