// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "tmd/graph.hpp"

namespace tmd {

// JSON graph format: {"features": [[...], ...], "edges": [[u, v], ...]}.
// Dataset format: {"name": ..., "graphs": [<graph>, ...], "labels": [...]},
// where "labels" is optional.
nlohmann::json graph_to_json(const AttributedGraph& g);
AttributedGraph graph_from_json(const nlohmann::json& j);
nlohmann::json dataset_to_json(const GraphDataset& ds);
GraphDataset dataset_from_json(const nlohmann::json& j);

AttributedGraph read_graph_json(const std::filesystem::path& path);
void write_graph_json(const AttributedGraph& g,
                      const std::filesystem::path& path);

// Accepts either a dataset object or a bare graph object (a one-graph dataset
// named after the file stem).
GraphDataset read_dataset_json(const std::filesystem::path& path);
void write_dataset_json(const GraphDataset& ds,
                        const std::filesystem::path& path);

// Reads a whole file; throws IoError when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& contents);

// Shortest decimal text that round-trips the double exactly.
std::string format_double(double x);

}  // namespace tmd
