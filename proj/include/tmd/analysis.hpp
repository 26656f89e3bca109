// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmd/graph.hpp"
#include "tmd/matrix.hpp"
#include "tmd/tree_distance.hpp"

namespace tmd {

struct DistanceMatrix {
  Matrix values;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
  TmdConfig config;
};

// Worker count from TMD_THREADS, else the hardware concurrency (at least 1).
std::size_t default_thread_count();

// Entry (i, j) = tmd(a[i], b[j]). One task per pair on `threads` workers;
// the result does not depend on the thread count. Throws ConfigError when the
// datasets disagree on feature dimension.
DistanceMatrix pairwise_tmd(const GraphDataset& a, const GraphDataset& b,
                            const TmdConfig& cfg, std::size_t threads);
// Self-distances: computes the upper triangle and mirrors it.
DistanceMatrix pairwise_tmd(const GraphDataset& ds, const TmdConfig& cfg,
                            std::size_t threads);

nlohmann::json config_to_json(const TmdConfig& cfg);
TmdConfig config_from_json(const nlohmann::json& j);

// CSV with a leading "# config:{...}" line that also records the ids.
std::string matrix_to_csv(const DistanceMatrix& d);
DistanceMatrix matrix_from_csv(const std::string& text);
void write_matrix_csv(const DistanceMatrix& d, const std::filesystem::path& p);
DistanceMatrix read_matrix_csv(const std::filesystem::path& p);

// K_ij = exp(-gamma * D_ij). Requires a square matrix and gamma > 0.
Matrix gram_matrix(const DistanceMatrix& d, double gamma);

// Wasserstein-1 between the uniform empirical distributions of two datasets
// with TMD as ground cost. Throws std::invalid_argument on an empty dataset.
double dataset_w1(const GraphDataset& a, const GraphDataset& b,
                  const TmdConfig& cfg, std::size_t threads = 1);
// Same, from a precomputed |a| x |b| distance matrix.
double w1_from_distances(const Matrix& d);

struct ShiftEntry {
  std::string test;
  double w1 = 0.0;
  std::optional<double> risk_gap;  // 2 K W1 when K is known
  std::optional<double> display;   // rescaled W1 for plotting only
};

struct ShiftReport {
  std::string train;
  std::vector<ShiftEntry> entries;  // ascending by W1, ties by input order
  TmdConfig config;
  std::optional<double> lipschitz_product;
};

// `display_max`, when given, rescales W1 values for display so that the
// largest equals it; stored W1 values are untouched.
ShiftReport shift_report(const GraphDataset& train,
                         const std::vector<GraphDataset>& tests,
                         const TmdConfig& cfg,
                         std::optional<double> lipschitz_product,
                         std::size_t threads = 1,
                         std::optional<double> display_max = std::nullopt);
nlohmann::json shift_report_to_json(const ShiftReport& r);

}  // namespace tmd
