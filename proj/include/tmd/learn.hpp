// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tmd/matrix.hpp"

namespace tmd {

// Majority label among the k nearest training points. Ties between labels go
// to the smaller summed distance, then to the smaller label. Equal distances
// are ranked by training index.
int knn_classify(std::span<const double> distances, std::span<const int> labels,
                 std::size_t k);

// Leave-one-out k-NN accuracy on a square distance matrix.
double knn_loo_accuracy(const Matrix& d, std::span<const int> labels,
                        std::size_t k);

struct Clustering {
  std::vector<std::size_t> assignment;  // cluster index per point
  std::vector<std::size_t> medoids;     // point index per cluster
  double cost = 0.0;                    // sum of distances to medoids
  std::size_t iterations = 0;
  std::vector<double> cost_history;     // after each assignment step
};

// k-medoids by alternating assignment and medoid update, started from a
// farthest-first selection whose first medoid is drawn with `seed`.
Clustering kmedoids(const Matrix& d, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter = 100);

// Normalized mutual information with the arithmetic mean of the two
// entropies (natural log). Two single-cluster partitions score 1.
double nmi(std::span<const int> labels_true, std::span<const int> labels_pred);

// 1 - H(pred | true) / H(pred); 1 when H(pred) = 0.
double completeness_score(std::span<const int> labels_true,
                          std::span<const int> labels_pred);

// Fraction of points whose label equals the most frequent label.
double majority_rate(std::span<const int> labels);

}  // namespace tmd
