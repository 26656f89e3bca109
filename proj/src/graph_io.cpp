// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tmd/error.hpp"

namespace tmd {

using nlohmann::json;

nlohmann::json graph_to_json(const AttributedGraph& g) {
  json features = json::array();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto x = g.feature(v);
    features.push_back(std::vector<double>(x.begin(), x.end()));
  }
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.first, e.second});
  json out{{"features", features}, {"edges", edges}};
  if (g.empty()) out["feature_dim"] = g.feature_dim();
  return out;
}

AttributedGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("features")) {
    throw ParseError("graph object requires a \"features\" array");
  }
  try {
    auto features = j.at("features").get<std::vector<Feature>>();
    std::vector<std::pair<NodeId, NodeId>> edges;
    if (j.contains("edges")) {
      for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
          throw ParseError("edge entries must be [u, v] pairs");
        }
        edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
      }
    }
    const std::size_t dim = j.value("feature_dim", std::size_t{1});
    return AttributedGraph(features, edges, dim);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid graph: ") + e.what());
  }
}

nlohmann::json dataset_to_json(const GraphDataset& ds) {
  json graphs = json::array();
  for (const auto& g : ds.graphs) graphs.push_back(graph_to_json(g));
  json out{{"name", ds.name}, {"graphs", graphs}};
  if (ds.labels) out["labels"] = *ds.labels;
  return out;
}

GraphDataset dataset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("graphs")) {
    throw ParseError("dataset object requires a \"graphs\" array");
  }
  GraphDataset ds;
  try {
    ds.name = j.value("name", std::string{});
    for (const auto& g : j.at("graphs")) ds.graphs.push_back(graph_from_json(g));
    if (j.contains("labels") && !j.at("labels").is_null()) {
      ds.labels = j.at("labels").get<std::vector<int>>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed dataset: ") + e.what());
  }
  try {
    ds.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return ds;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("error writing " + path.string());
}

namespace {

json parse_json_text(const std::string& text, const std::filesystem::path& p) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
}

}  // namespace

AttributedGraph read_graph_json(const std::filesystem::path& path) {
  return graph_from_json(parse_json_text(read_text_file(path), path));
}

void write_graph_json(const AttributedGraph& g,
                      const std::filesystem::path& path) {
  write_text_file(path, graph_to_json(g).dump(2) + "\n");
}

GraphDataset read_dataset_json(const std::filesystem::path& path) {
  json j = parse_json_text(read_text_file(path), path);
  if (j.is_object() && j.contains("features") && !j.contains("graphs")) {
    GraphDataset ds;
    ds.name = path.stem().string();
    ds.graphs.push_back(graph_from_json(j));
    return ds;
  }
  GraphDataset ds = dataset_from_json(j);
  if (ds.name.empty()) ds.name = path.stem().string();
  return ds;
}

void write_dataset_json(const GraphDataset& ds,
                        const std::filesystem::path& path) {
  write_text_file(path, dataset_to_json(ds).dump(2) + "\n");
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace tmd
