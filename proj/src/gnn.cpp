// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tmd/error.hpp"
#include "tmd/graph_io.hpp"
#include "tmd/weights.hpp"

namespace tmd {
namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

Eigen::VectorXd pairwise_sum(const std::vector<const Eigen::VectorXd*>& xs,
                             std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return *xs[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

// Sum (or mean) of a multiset of vectors, independent of input order.
Eigen::VectorXd aggregate(std::vector<const Eigen::VectorXd*> xs,
                          Eigen::Index dim, Aggregation mode) {
  if (xs.empty()) return Eigen::VectorXd::Zero(dim);
  std::sort(xs.begin(), xs.end(),
            [](const auto* a, const auto* b) { return lex_less(*a, *b); });
  Eigen::VectorXd s = pairwise_sum(xs, 0, xs.size());
  if (mode == Aggregation::mean) s /= static_cast<double>(xs.size());
  return s;
}

AffineMap random_map(std::size_t out, std::size_t in, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  AffineMap m{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
  for (Eigen::Index i = 0; i < m.weight.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.weight.cols(); ++j) m.weight(i, j) = coord(rng);
  }
  return m;
}

nlohmann::json map_to_json(const AffineMap& m) {
  nlohmann::json w = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.weight.rows(); ++i) {
    std::vector<double> row(m.weight.cols());
    for (Eigen::Index j = 0; j < m.weight.cols(); ++j) row[j] = m.weight(i, j);
    w.push_back(row);
  }
  return {{"weight", w},
          {"bias", std::vector<double>(m.bias.data(),
                                       m.bias.data() + m.bias.size())}};
}

AffineMap map_from_json(const nlohmann::json& j) {
  const auto rows = j.at("weight").get<std::vector<std::vector<double>>>();
  if (rows.empty() || rows.front().empty()) {
    throw ParseError("weight matrix must be non-empty");
  }
  AffineMap m{Eigen::MatrixXd(rows.size(), rows.front().size()),
              Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()))};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw ParseError("ragged weight matrix");
    }
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      m.weight(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          rows[i][c];
    }
  }
  if (j.contains("bias")) {
    const auto bias = j.at("bias").get<std::vector<double>>();
    if (bias.size() != rows.size()) throw ParseError("bias length mismatch");
    for (std::size_t i = 0; i < bias.size(); ++i) {
      m.bias(static_cast<Eigen::Index>(i)) = bias[i];
    }
  }
  return m;
}

}  // namespace

std::size_t GinModel::input_dim() const {
  return layers.empty() ? static_cast<std::size_t>(readout.weight.cols())
                        : static_cast<std::size_t>(layers.front().phi.weight.cols());
}

std::size_t GinModel::output_dim() const {
  return static_cast<std::size_t>(readout.weight.rows());
}

double GinModel::lipschitz_product() const {
  return std::accumulate(lipschitz.begin(), lipschitz.end(), 1.0,
                         std::multiplies<>());
}

bool GinModel::bias_free() const {
  for (const auto& layer : layers) {
    if (!layer.phi.bias_free()) return false;
    if (layer.neighbor && !layer.neighbor->bias_free()) return false;
  }
  return readout.bias_free();
}

void GinModel::finalize() {
  if (layers.empty()) throw ConfigError("model needs at least one layer");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  Eigen::Index width = layers.front().phi.weight.cols();
  std::size_t with_neighbor = 0;
  for (const auto& layer : layers) {
    const auto& w = layer.phi.weight;
    if (w.cols() != width || layer.phi.bias.size() != w.rows()) {
      throw ConfigError("layer dimensions do not chain");
    }
    if (layer.neighbor) {
      ++with_neighbor;
      const auto& nw = layer.neighbor->weight;
      if (nw.rows() != width || nw.cols() != width ||
          layer.neighbor->bias.size() != width) {
        throw ConfigError("neighbor map must be square on the layer input");
      }
    }
    width = w.rows();
  }
  if (readout.weight.cols() != width ||
      readout.bias.size() != readout.weight.rows()) {
    throw ConfigError("readout dimensions do not match the last layer");
  }
  if (with_neighbor != 0 && with_neighbor != layers.size()) {
    throw ConfigError("either every layer or no layer has a neighbor map");
  }
  lipschitz.clear();
  neighbor_lipschitz.clear();
  for (const auto& layer : layers) {
    lipschitz.push_back(spectral_norm(layer.phi.weight));
    if (layer.neighbor) {
      neighbor_lipschitz.push_back(spectral_norm(layer.neighbor->weight));
    }
  }
  lipschitz.push_back(spectral_norm(readout.weight));
}

double spectral_norm(const Eigen::MatrixXd& w) {
  if (w.size() == 0 || w.isZero(0.0)) return 0.0;
  const Eigen::MatrixXd gram = w.transpose() * w;
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  Eigen::VectorXd v(gram.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = coord(rng);
  v.normalize();
  double lambda = 0.0;
  constexpr int kMinIter = 50;
  constexpr int kMaxIter = 200000;
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd next = gram * v;
    lambda = v.dot(next);
    const double residual = (next - lambda * v).norm();
    const double len = next.norm();
    if (len == 0.0) return 0.0;
    v = next / len;
    if (it + 1 >= kMinIter && residual <= 1e-10 * std::abs(lambda)) break;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

GinModel random_gin(std::size_t p, std::size_t d, std::size_t layers,
                    std::uint64_t seed, Aggregation aggregation,
                    std::size_t d_out, double epsilon) {
  if (layers == 0) throw ConfigError("model needs at least one layer");
  std::mt19937_64 rng(seed);
  GinModel m;
  m.epsilon = epsilon;
  m.aggregation = aggregation;
  std::size_t in = p;
  for (std::size_t l = 0; l < layers; ++l) {
    m.layers.push_back({random_map(d, in, rng), std::nullopt});
    in = d;
  }
  m.readout = random_map(d_out, d, rng);
  m.finalize();
  return m;
}

Eigen::VectorXd gin_forward(const GinModel& m, const AttributedGraph& g) {
  if (g.feature_dim() != m.input_dim()) {
    throw std::invalid_argument("graph feature dimension " +
                                std::to_string(g.feature_dim()) +
                                " does not match model input " +
                                std::to_string(m.input_dim()));
  }
  const std::size_t n = g.node_count();
  std::vector<Eigen::VectorXd> z(n);
  for (NodeId v = 0; v < n; ++v) {
    auto x = g.feature(v);
    z[v] = Eigen::Map<const Eigen::VectorXd>(x.data(),
                                             static_cast<Eigen::Index>(x.size()));
  }
  Eigen::Index width = static_cast<Eigen::Index>(g.feature_dim());
  for (const auto& layer : m.layers) {
    std::vector<Eigen::VectorXd> next(n);
    for (NodeId v = 0; v < n; ++v) {
      std::vector<const Eigen::VectorXd*> around;
      for (NodeId u : g.neighbors(v)) around.push_back(&z[u]);
      const Eigen::VectorXd agg = aggregate(around, width, m.aggregation);
      const Eigen::VectorXd mixed =
          layer.neighbor ? Eigen::VectorXd(z[v] + layer.neighbor->apply(agg))
                         : Eigen::VectorXd(z[v] + m.epsilon * agg);
      next[v] = layer.phi.apply(mixed).cwiseMax(0.0);
    }
    z = std::move(next);
    width = layer.phi.weight.rows();
  }
  std::vector<const Eigen::VectorXd*> all;
  for (const auto& zv : z) all.push_back(&zv);
  return m.readout.apply(aggregate(all, width, m.aggregation));
}

TmdConfig lipschitz_config(const GinModel& m) {
  TmdConfig cfg;
  cfg.depth = m.depth() + 1;
  cfg.mode = m.aggregation;
  cfg.schedule = m.neighbor_lipschitz.empty()
                     ? pascal_weights(m.depth(), m.epsilon)
                     : lipschitz_weights(m.neighbor_lipschitz);
  return cfg;
}

LipschitzReport lipschitz_check(const GinModel& m, const AttributedGraph& ga,
                                const AttributedGraph& gb) {
  return lipschitz_check(m, ga, gb, lipschitz_config(m));
}

LipschitzReport lipschitz_check(const GinModel& m, const AttributedGraph& ga,
                                const AttributedGraph& gb,
                                const TmdConfig& cfg) {
  if (cfg.mode != m.aggregation) {
    throw ConfigError("model aggregation " + to_string(m.aggregation) +
                      " requires distance mode " + to_string(m.aggregation));
  }
  if (cfg.depth != m.depth() + 1) {
    throw ConfigError("a " + std::to_string(m.depth()) +
                      "-layer model is compared at depth " +
                      std::to_string(m.depth() + 1));
  }
  LipschitzReport r;
  r.config = cfg;
  r.lhs = (gin_forward(m, ga) - gin_forward(m, gb)).norm();
  r.tmd = tmd(ga, gb, cfg);
  r.lipschitz_product = m.lipschitz_product();
  r.rhs = r.lipschitz_product * r.tmd;
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? INFINITY : 0.0);
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-7) + 1e-12;
  r.certified = m.bias_free();
  return r;
}

double empirical_lipschitz(std::span<const double> output_gaps,
                           std::span<const double> distances) {
  if (output_gaps.size() != distances.size()) {
    throw std::invalid_argument("sequences differ in length");
  }
  std::optional<double> best;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (distances[i] < 1e-12) continue;
    const double r = output_gaps[i] / distances[i];
    best = best ? std::max(*best, r) : r;
  }
  if (!best) throw std::invalid_argument("no pair with positive distance");
  return *best;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
  if (x.size() < 2) throw std::invalid_argument("need at least two samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("correlation of a constant sequence");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

nlohmann::json model_to_json(const GinModel& m) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : m.layers) {
    nlohmann::json j = map_to_json(layer.phi);
    if (layer.neighbor) j["neighbor"] = map_to_json(*layer.neighbor);
    layers.push_back(j);
  }
  return {{"epsilon", m.epsilon},
          {"aggregation", to_string(m.aggregation)},
          {"layers", layers},
          {"readout", map_to_json(m.readout)},
          {"lipschitz", m.lipschitz}};
}

GinModel model_from_json(const nlohmann::json& j) {
  GinModel m;
  try {
    m.epsilon = j.value("epsilon", 1.0);
    m.aggregation = parse_aggregation(j.value("aggregation", std::string("sum")));
    for (const auto& layer : j.at("layers")) {
      GinLayer l{map_from_json(layer), std::nullopt};
      if (layer.contains("neighbor")) l.neighbor = map_from_json(layer.at("neighbor"));
      m.layers.push_back(std::move(l));
    }
    m.readout = map_from_json(j.at("readout"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model: ") + e.what());
  }
  m.finalize();
  return m;
}

GinModel read_model_json(const std::filesystem::path& path) {
  try {
    return model_from_json(nlohmann::json::parse(read_text_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_model_json(const GinModel& m, const std::filesystem::path& path) {
  write_text_file(path, model_to_json(m).dump(2) + "\n");
}

}  // namespace tmd
