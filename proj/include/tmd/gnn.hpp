// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "tmd/graph.hpp"
#include "tmd/tree_distance.hpp"

namespace tmd {

struct AffineMap {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    return weight * x + bias;
  }
  bool bias_free() const { return bias.isZero(0.0); }
};

// One message-passing layer: z' = relu(phi(z + eps * agg(neighbors))), or with
// `neighbor` set, z' = relu(phi(z + neighbor(agg(neighbors)))).
struct GinLayer {
  AffineMap phi;
  std::optional<AffineMap> neighbor;
};

// Message-passing network with sum (GIN) or mean (GCN-style) aggregation in
// both the layers and the graph readout.
struct GinModel {
  double epsilon = 1.0;
  Aggregation aggregation = Aggregation::sum;
  std::vector<GinLayer> layers;
  AffineMap readout;
  // Spectral norms of the layer maps followed by the readout (L+1 entries).
  std::vector<double> lipschitz;
  // Spectral norms of the neighbor maps, when every layer has one.
  std::vector<double> neighbor_lipschitz;

  std::size_t depth() const noexcept { return layers.size(); }
  std::size_t input_dim() const;
  std::size_t output_dim() const;
  double lipschitz_product() const;
  // True when every bias is zero; the TMD bound assumes maps fixing 0.
  bool bias_free() const;
  // Recomputes `lipschitz` and `neighbor_lipschitz`; checks dimensions.
  void finalize();
};

// Largest singular value by power iteration on W^T W: at least 50 steps and
// until the eigen-residual drops below 1e-10 relative.
double spectral_norm(const Eigen::MatrixXd& w);

// Weights uniform on [-1, 1], zero biases. Layer 1 maps p -> d, the readout
// maps d -> d_out.
GinModel random_gin(std::size_t p, std::size_t d, std::size_t layers,
                    std::uint64_t seed, Aggregation aggregation,
                    std::size_t d_out = 1, double epsilon = 1.0);

// Graph embedding h(G). Multisets of vectors are summed in sorted order, so
// the result is bitwise invariant under node relabeling. An empty graph maps
// to the readout of the zero vector.
Eigen::VectorXd gin_forward(const GinModel& m, const AttributedGraph& g);

struct LipschitzReport {
  double lhs = 0.0;  // ||h(G_a) - h(G_b)||
  double rhs = 0.0;  // prod K * TMD
  double ratio = 0.0;
  double tmd = 0.0;
  double lipschitz_product = 0.0;
  bool holds = true;
  // False when the model has biases, in which case the bound is not implied.
  bool certified = true;
  TmdConfig config;
};

// Distance configuration matched to the model: depth L+1, Pascal weights at
// level L scaled by epsilon (or per-layer neighbor constants), same mode.
TmdConfig lipschitz_config(const GinModel& m);

LipschitzReport lipschitz_check(const GinModel& m, const AttributedGraph& ga,
                                const AttributedGraph& gb);
// Uses a caller-supplied configuration; throws ConfigError unless its mode
// matches the model aggregation and its depth is L+1.
LipschitzReport lipschitz_check(const GinModel& m, const AttributedGraph& ga,
                                const AttributedGraph& gb,
                                const TmdConfig& cfg);

// max_i h[i] / t[i] over pairs with t[i] >= 1e-12. Throws
// std::invalid_argument when lengths differ or nothing is left.
double empirical_lipschitz(std::span<const double> output_gaps,
                           std::span<const double> distances);

// Sample Pearson correlation. Throws std::invalid_argument on length mismatch,
// fewer than two samples or a constant sequence.
double pearson_r(std::span<const double> x, std::span<const double> y);

nlohmann::json model_to_json(const GinModel& m);
GinModel model_from_json(const nlohmann::json& j);
GinModel read_model_json(const std::filesystem::path& path);
void write_model_json(const GinModel& m, const std::filesystem::path& path);

}  // namespace tmd
