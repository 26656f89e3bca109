// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tmd::cli {

// Where a dataset comes from: a TUDataset directory or a JSON file.
struct DataRef {
  std::string path;
  std::string name;  // TUDataset prefix; defaults to the directory name
};

struct DistanceFlags {
  std::size_t depth = 2;
  std::string weights = "constant:0.5";
  std::string mode = "sum";
  std::optional<std::size_t> threads;
  bool standardize = false;
};

struct DistOptions {
  DataRef data;
  std::optional<DataRef> data_b;
  DistanceFlags dist;
  std::string out;
};

struct GramOptions {
  std::string matrix;
  double gamma = 0.1;
  std::string out;
};

struct KnnOptions {
  std::string matrix;
  DataRef data;
  std::size_t k = 1;
  std::string out;
};

struct ClusterOptions {
  std::string matrix;
  std::optional<DataRef> data;
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::size_t max_iter = 100;
  std::string assignments;
  std::string out;
};

struct ShiftOptions {
  DataRef train;
  std::vector<std::string> tests;
  DistanceFlags dist;
  std::optional<double> lipschitz;
  std::optional<double> display_max;
  std::string out;
};

struct LipschitzOptions {
  std::string model;
  std::size_t layers = 2;
  std::size_t hidden = 8;
  std::string aggregation = "sum";
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  std::string graph_a;
  std::string graph_b;
  std::optional<DataRef> data;
  std::size_t pairs = 200;
  std::optional<std::size_t> threads;
  std::string out;
};

struct PerturbOptions {
  std::string graph;
  std::string kind = "node-drop";
  std::optional<std::size_t> node;
  std::vector<std::size_t> edge;
  std::vector<double> feature;
  std::size_t trials = 0;
  std::size_t depth = 2;
  std::string weights = "constant:1";
  std::uint64_t seed = 0;
  std::string out;
};

struct WlOptions {
  std::string graph_a;
  std::string graph_b;
  std::size_t iterations = 10;
  std::string out;
};

int cmd_dist(const DistOptions& o);
int cmd_gram(const GramOptions& o);
int cmd_knn(const KnnOptions& o);
int cmd_cluster(const ClusterOptions& o);
int cmd_shift(const ShiftOptions& o);
int cmd_lipschitz(const LipschitzOptions& o);
int cmd_perturb(const PerturbOptions& o);
int cmd_wl(const WlOptions& o);

}  // namespace tmd::cli
