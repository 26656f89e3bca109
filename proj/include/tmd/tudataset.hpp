// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "tmd/graph.hpp"

namespace tmd {

struct TuParseOptions {
  // Rescale each continuous attribute column to zero mean and unit variance
  // over all nodes of the dataset. Off by default.
  bool standardize_attributes = false;
};

// Reads the TUDataset text layout `<dir>/<name>_*.txt`.
//
// Discrete node labels are one-hot encoded over the sorted set of distinct
// label values. Continuous attributes come first when both are present. A
// dataset with neither gets the scalar feature 1 on every node. Edge listings
// (u,v) and (v,u) collapse to one undirected edge.
//
// Throws IoError when a mandatory file is missing and ParseError on malformed
// content (self-loops, out-of-range nodes, non-contiguous graph ids, ragged
// attribute rows).
GraphDataset parse_tudataset(const std::filesystem::path& dir,
                             const std::string& name,
                             const TuParseOptions& options = {});

// Writes the dataset back in the same layout. Features are written as
// `<name>_node_attributes.txt` so that parsing the output reproduces them
// exactly.
void write_tudataset(const GraphDataset& ds, const std::filesystem::path& dir);

}  // namespace tmd
