// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>

#include "tmd/graph.hpp"

namespace tmd {

struct WlResult {
  bool distinguishable = false;
  // First refinement round whose color histograms differ; round 0 compares
  // the initial colors (exact feature equality) and node counts.
  std::optional<std::size_t> iteration;
};

// 1-WL color refinement run jointly on both graphs for up to `iterations`
// rounds. Stops early once the joint partition is stable.
WlResult wl_refine(const AttributedGraph& ga, const AttributedGraph& gb,
                   std::size_t iterations);

inline bool wl_distinguishable(const AttributedGraph& ga,
                               const AttributedGraph& gb,
                               std::size_t iterations) {
  return wl_refine(ga, gb, iterations).distinguishable;
}

}  // namespace tmd
