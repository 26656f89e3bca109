// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/tudataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string_view>

#include "tmd/error.hpp"
#include "tmd/graph_io.hpp"

namespace tmd {
namespace fs = std::filesystem;
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& where) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError(where + ": cannot parse '" + text + "'");
  }
  return value;
}

// Non-empty lines of a file with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> read_lines(
    const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string t = trim(line);
    if (!t.empty()) lines.emplace_back(number, std::move(t));
  }
  return lines;
}

std::string where(const fs::path& path, std::size_t line) {
  return path.filename().string() + ":" + std::to_string(line);
}

template <typename T>
std::vector<T> read_column(const fs::path& path) {
  std::vector<T> out;
  for (const auto& [number, line] : read_lines(path)) {
    auto fields = split_fields(line);
    // Some releases append extra columns to label files; the first is used.
    out.push_back(parse_number<T>(fields.front(), where(path, number)));
  }
  return out;
}

}  // namespace

GraphDataset parse_tudataset(const fs::path& dir, const std::string& name,
                             const TuParseOptions& options) {
  auto file = [&](const char* suffix) { return dir / (name + suffix); };
  const fs::path edges_path = file("_A.txt");
  const fs::path indicator_path = file("_graph_indicator.txt");
  for (const auto& p : {edges_path, indicator_path}) {
    if (!fs::exists(p)) throw IoError("missing file " + p.string());
  }

  const auto indicator = read_column<long long>(indicator_path);
  const std::size_t node_total = indicator.size();
  std::size_t graph_count = 0;
  for (std::size_t i = 0; i < node_total; ++i) {
    const long long id = indicator[i];
    const long long expected = static_cast<long long>(graph_count);
    if (id == expected + 1) {
      ++graph_count;
    } else if (id != expected || graph_count == 0) {
      throw ParseError(where(indicator_path, i + 1) +
                       ": graph ids must be contiguous, non-decreasing and "
                       "start at 1");
    }
  }

  std::vector<std::size_t> graph_start(graph_count + 1, node_total);
  for (std::size_t i = node_total; i-- > 0;) {
    graph_start[static_cast<std::size_t>(indicator[i] - 1)] = i;
  }

  std::vector<std::optional<std::vector<double>>> attributes;
  std::size_t attr_dim = 0;
  if (fs::exists(file("_node_attributes.txt"))) {
    const fs::path path = file("_node_attributes.txt");
    auto lines = read_lines(path);
    if (lines.size() != node_total) {
      throw ParseError(path.filename().string() + " has " +
                       std::to_string(lines.size()) + " rows for " +
                       std::to_string(node_total) + " nodes");
    }
    for (const auto& [number, line] : lines) {
      std::vector<double> row;
      for (const auto& f : split_fields(line)) {
        row.push_back(parse_number<double>(f, where(path, number)));
      }
      if (attributes.empty()) attr_dim = row.size();
      if (row.size() != attr_dim || attr_dim == 0) {
        throw ParseError(where(path, number) + ": ragged attribute row");
      }
      attributes.emplace_back(std::move(row));
    }
  }

  std::vector<long long> node_labels;
  std::vector<long long> alphabet;
  if (fs::exists(file("_node_labels.txt"))) {
    node_labels = read_column<long long>(file("_node_labels.txt"));
    if (node_labels.size() != node_total) {
      throw ParseError("node label count does not match node count");
    }
    std::set<long long> distinct(node_labels.begin(), node_labels.end());
    alphabet.assign(distinct.begin(), distinct.end());
  }

  if (options.standardize_attributes && attr_dim > 0) {
    for (std::size_t c = 0; c < attr_dim; ++c) {
      double mean = 0.0;
      for (const auto& row : attributes) mean += (*row)[c];
      mean /= static_cast<double>(node_total);
      double var = 0.0;
      for (const auto& row : attributes) {
        var += ((*row)[c] - mean) * ((*row)[c] - mean);
      }
      const double sd = std::sqrt(var / static_cast<double>(node_total));
      for (auto& row : attributes) {
        (*row)[c] = sd > 0.0 ? ((*row)[c] - mean) / sd : 0.0;
      }
    }
  }

  const std::size_t dim =
      attr_dim + alphabet.size() == 0 ? 1 : attr_dim + alphabet.size();
  std::vector<std::vector<Feature>> features(graph_count);
  for (std::size_t i = 0; i < node_total; ++i) {
    Feature x;
    x.reserve(dim);
    if (attr_dim > 0) x = *attributes[i];
    if (!alphabet.empty()) {
      const auto pos = std::lower_bound(alphabet.begin(), alphabet.end(),
                                        node_labels[i]) -
                       alphabet.begin();
      for (std::size_t k = 0; k < alphabet.size(); ++k) {
        x.push_back(static_cast<std::size_t>(pos) == k ? 1.0 : 0.0);
      }
    }
    if (x.empty()) x.push_back(1.0);
    features[static_cast<std::size_t>(indicator[i] - 1)].push_back(
        std::move(x));
  }

  std::vector<std::set<std::pair<NodeId, NodeId>>> edges(graph_count);
  for (const auto& [number, line] : read_lines(edges_path)) {
    auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw ParseError(where(edges_path, number) + ": expected 'u, v'");
    }
    const auto u = parse_number<long long>(fields[0], where(edges_path, number));
    const auto v = parse_number<long long>(fields[1], where(edges_path, number));
    const auto in_range = [&](long long x) {
      return x >= 1 && static_cast<std::size_t>(x) <= node_total;
    };
    if (!in_range(u) || !in_range(v)) {
      throw ParseError(where(edges_path, number) + ": node index out of range");
    }
    if (u == v) {
      throw ParseError(where(edges_path, number) + ": self-loop at node " +
                       std::to_string(u));
    }
    const auto gu = static_cast<std::size_t>(u - 1);
    const auto gv = static_cast<std::size_t>(v - 1);
    if (indicator[gu] != indicator[gv]) {
      throw ParseError(where(edges_path, number) +
                       ": edge joins nodes of different graphs");
    }
    const std::size_t g = static_cast<std::size_t>(indicator[gu] - 1);
    const NodeId a = gu - graph_start[g];
    const NodeId b = gv - graph_start[g];
    edges[g].emplace(std::min(a, b), std::max(a, b));
  }

  GraphDataset ds;
  ds.name = name;
  ds.graphs.reserve(graph_count);
  for (std::size_t g = 0; g < graph_count; ++g) {
    std::vector<std::pair<NodeId, NodeId>> list(edges[g].begin(),
                                                edges[g].end());
    ds.graphs.emplace_back(features[g], list, dim);
  }

  if (fs::exists(file("_graph_labels.txt"))) {
    auto labels = read_column<int>(file("_graph_labels.txt"));
    if (labels.size() != graph_count) {
      throw ParseError("graph label count (" + std::to_string(labels.size()) +
                       ") does not match graph count (" +
                       std::to_string(graph_count) + ")");
    }
    ds.labels = std::move(labels);
  }
  return ds;
}

void write_tudataset(const GraphDataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream a, indicator, attrs, labels;
  std::size_t offset = 0;
  for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
    const auto& graph = ds.graphs[g];
    for (NodeId v = 0; v < graph.node_count(); ++v) {
      indicator << (g + 1) << "\n";
      auto x = graph.feature(v);
      for (std::size_t c = 0; c < x.size(); ++c) {
        attrs << (c ? ", " : "") << format_double(x[c]);
      }
      attrs << "\n";
    }
    for (const auto& e : graph.edges()) {
      a << (offset + e.first + 1) << ", " << (offset + e.second + 1) << "\n";
      a << (offset + e.second + 1) << ", " << (offset + e.first + 1) << "\n";
    }
    offset += graph.node_count();
  }
  auto file = [&](const char* suffix) { return dir / (ds.name + suffix); };
  write_text_file(file("_A.txt"), a.str());
  write_text_file(file("_graph_indicator.txt"), indicator.str());
  write_text_file(file("_node_attributes.txt"), attrs.str());
  if (ds.labels) {
    for (int l : *ds.labels) labels << l << "\n";
    write_text_file(file("_graph_labels.txt"), labels.str());
  }
}

}  // namespace tmd
