// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace tmd {
namespace {

void check_lengths(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("label sequences differ in length");
  }
  if (a.empty()) throw std::invalid_argument("label sequences are empty");
}

double entropy(const std::map<int, std::size_t>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h;
}

struct Contingency {
  std::map<int, std::size_t> a, b;
  std::map<std::pair<int, int>, std::size_t> joint;
  double n = 0.0;
};

Contingency contingency(std::span<const int> x, std::span<const int> y) {
  Contingency c;
  c.n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++c.a[x[i]];
    ++c.b[y[i]];
    ++c.joint[{x[i], y[i]}];
  }
  return c;
}

double mutual_information(const Contingency& c) {
  double mi = 0.0;
  for (const auto& [key, nij] : c.joint) {
    const double pij = static_cast<double>(nij) / c.n;
    const double pi = static_cast<double>(c.a.at(key.first)) / c.n;
    const double pj = static_cast<double>(c.b.at(key.second)) / c.n;
    mi += pij * std::log(pij / (pi * pj));
  }
  return std::max(mi, 0.0);
}

}  // namespace

int knn_classify(std::span<const double> distances, std::span<const int> labels,
                 std::size_t k) {
  if (distances.empty()) throw std::invalid_argument("empty training set");
  if (distances.size() != labels.size()) {
    throw std::invalid_argument("distances and labels differ in length");
  }
  if (k == 0 || k > distances.size()) {
    throw std::invalid_argument("k must lie in [1, " +
                                std::to_string(distances.size()) + "]");
  }
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return distances[a] < distances[b];
  });
  std::map<int, std::pair<std::size_t, double>> votes;
  for (std::size_t r = 0; r < k; ++r) {
    auto& v = votes[labels[order[r]]];
    ++v.first;
    v.second += distances[order[r]];
  }
  int best = votes.begin()->first;
  auto best_vote = votes.begin()->second;
  for (const auto& [label, vote] : votes) {
    if (vote.first > best_vote.first ||
        (vote.first == best_vote.first && vote.second < best_vote.second)) {
      best = label;
      best_vote = vote;
    }
  }
  return best;
}

double knn_loo_accuracy(const Matrix& d, std::span<const int> labels,
                        std::size_t k) {
  const std::size_t n = d.rows();
  if (!d.square() || labels.size() != n || n < 2) {
    throw std::invalid_argument("leave-one-out needs a square matrix with "
                                "matching labels and at least two points");
  }
  std::size_t correct = 0;
  std::vector<double> dist;
  std::vector<int> lab;
  for (std::size_t q = 0; q < n; ++q) {
    dist.clear();
    lab.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == q) continue;
      dist.push_back(d(q, i));
      lab.push_back(labels[i]);
    }
    if (knn_classify(dist, lab, k) == labels[q]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

Clustering kmedoids(const Matrix& d, std::size_t k, std::uint64_t seed,
                    std::size_t max_iter) {
  const std::size_t n = d.rows();
  if (!d.square()) throw std::invalid_argument("k-medoids needs a square matrix");
  if (k == 0 || k > n) {
    throw std::invalid_argument("k must lie in [1, " + std::to_string(n) + "]");
  }
  Clustering c;
  std::mt19937_64 rng(seed);
  c.medoids.push_back(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = d(i, c.medoids[0]);
  while (c.medoids.size() < k) {
    std::size_t far = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(c.medoids.begin(), c.medoids.end(), i) != c.medoids.end()) {
        continue;
      }
      if (far == n || nearest[i] > nearest[far]) far = i;
    }
    c.medoids.push_back(far);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], d(i, far));
  }

  auto assign = [&] {
    c.assignment.assign(n, 0);
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      for (std::size_t m = 1; m < k; ++m) {
        if (d(i, c.medoids[m]) < d(i, c.medoids[best])) best = m;
      }
      // A medoid always belongs to its own cluster.
      for (std::size_t m = 0; m < k; ++m) {
        if (c.medoids[m] == i) best = m;
      }
      c.assignment[i] = best;
      cost += d(i, c.medoids[best]);
    }
    return cost;
  };

  c.cost = assign();
  c.cost_history.push_back(c.cost);
  for (c.iterations = 0; c.iterations < max_iter; ++c.iterations) {
    bool changed = false;
    for (std::size_t m = 0; m < k; ++m) {
      std::size_t best = c.medoids[m];
      double best_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (c.assignment[i] == m) best_sum += d(i, best);
      }
      for (std::size_t cand = 0; cand < n; ++cand) {
        if (c.assignment[cand] != m) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (c.assignment[i] == m) s += d(i, cand);
        }
        if (s < best_sum) {
          best_sum = s;
          best = cand;
        }
      }
      if (best != c.medoids[m]) {
        c.medoids[m] = best;
        changed = true;
      }
    }
    if (!changed) break;
    const double cost = assign();
    if (cost > c.cost + 1e-12 * std::max(1.0, c.cost)) {
      throw std::logic_error("k-medoids objective increased");
    }
    c.cost = cost;
    c.cost_history.push_back(cost);
  }
  return c;
}

double nmi(std::span<const int> labels_true, std::span<const int> labels_pred) {
  check_lengths(labels_true, labels_pred);
  const Contingency c = contingency(labels_true, labels_pred);
  const double ha = entropy(c.a, c.n);
  const double hb = entropy(c.b, c.n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  const double mean = 0.5 * (ha + hb);
  return std::clamp(mutual_information(c) / mean, 0.0, 1.0);
}

double completeness_score(std::span<const int> labels_true,
                          std::span<const int> labels_pred) {
  check_lengths(labels_true, labels_pred);
  const Contingency c = contingency(labels_true, labels_pred);
  const double h_pred = entropy(c.b, c.n);
  if (h_pred == 0.0) return 1.0;
  // H(pred | true) = H(pred) - I(true; pred).
  const double conditional = h_pred - mutual_information(c);
  return std::clamp(1.0 - conditional / h_pred, 0.0, 1.0);
}

double majority_rate(std::span<const int> labels) {
  if (labels.empty()) throw std::invalid_argument("no labels");
  std::map<int, std::size_t> counts;
  for (int l : labels) ++counts[l];
  std::size_t top = 0;
  for (const auto& [label, c] : counts) top = std::max(top, c);
  return static_cast<double>(top) / static_cast<double>(labels.size());
}

}  // namespace tmd
