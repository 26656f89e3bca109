// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <filesystem>
#include <iostream>
#include <random>

#include <nlohmann/json.hpp>

#include "tmd/analysis.hpp"
#include "tmd/error.hpp"
#include "tmd/gnn.hpp"
#include "tmd/graph_io.hpp"
#include "tmd/learn.hpp"
#include "tmd/perturb.hpp"
#include "tmd/tudataset.hpp"
#include "tmd/wl.hpp"

namespace tmd::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

GraphDataset load_dataset(const DataRef& ref, bool standardize = false) {
  const fs::path path(ref.path);
  if (!fs::exists(path)) throw IoError("no such file or directory: " + ref.path);
  if (fs::is_directory(path)) {
    std::string name = ref.name;
    if (name.empty()) name = fs::absolute(path).lexically_normal().filename().string();
    if (name.empty()) name = fs::absolute(path).parent_path().filename().string();
    return parse_tudataset(path, name, {standardize});
  }
  GraphDataset ds = read_dataset_json(path);
  if (!ref.name.empty()) ds.name = ref.name;
  return ds;
}

DataRef parse_ref(const std::string& text) {
  // "path" or "path:name" for TUDataset directories with a different prefix.
  const auto colon = text.rfind(':');
  if (colon != std::string::npos && colon > 0 && !fs::exists(text)) {
    return {text.substr(0, colon), text.substr(colon + 1)};
  }
  return {text, ""};
}

TmdConfig make_config(const DistanceFlags& f) {
  TmdConfig cfg;
  cfg.depth = f.depth;
  cfg.schedule = WeightSchedule::parse(f.weights);
  cfg.mode = parse_aggregation(f.mode);
  if (cfg.schedule.kind() == WeightSchedule::Kind::pascal &&
      cfg.depth != cfg.schedule.defined_up_to() + 1) {
    throw ConfigError("weights " + f.weights + " belong to depth " +
                      std::to_string(cfg.schedule.defined_up_to() + 1) +
                      ", got --depth " + std::to_string(cfg.depth));
  }
  cfg.validate();
  return cfg;
}

std::size_t thread_count(const std::optional<std::size_t>& t) {
  return t ? std::max<std::size_t>(1, *t) : default_thread_count();
}

void warn_zero_features(const GraphDataset& ds) {
  std::size_t graphs = 0;
  for (const auto& g : ds.graphs) {
    if (!zero_feature_nodes(g).empty()) ++graphs;
  }
  if (graphs > 0) {
    std::cerr << "warning: " << graphs << " graph(s) in '" << ds.name
              << "' have all-zero node features; such nodes cannot be told "
                 "apart from blank trees and distances may vanish\n";
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(out, text);
  }
}

void emit_json(const json& j, const std::string& out) {
  emit(j.dump(2) + "\n", out);
}

const std::vector<int>& require_labels(const GraphDataset& ds) {
  if (!ds.labels) throw ConfigError("dataset '" + ds.name + "' has no labels");
  return *ds.labels;
}

}  // namespace

int cmd_dist(const DistOptions& o) {
  const TmdConfig cfg = make_config(o.dist);
  const GraphDataset a = load_dataset(o.data, o.dist.standardize);
  warn_zero_features(a);
  const std::size_t threads = thread_count(o.dist.threads);
  DistanceMatrix d;
  if (o.data_b) {
    const GraphDataset b = load_dataset(*o.data_b, o.dist.standardize);
    warn_zero_features(b);
    d = pairwise_tmd(a, b, cfg, threads);
  } else {
    d = pairwise_tmd(a, cfg, threads);
  }
  emit(matrix_to_csv(d), o.out);
  return 0;
}

int cmd_gram(const GramOptions& o) {
  const DistanceMatrix d = read_matrix_csv(o.matrix);
  DistanceMatrix k = d;
  k.values = gram_matrix(d, o.gamma);
  emit(matrix_to_csv(k), o.out);
  return 0;
}

int cmd_knn(const KnnOptions& o) {
  const DistanceMatrix d = read_matrix_csv(o.matrix);
  const GraphDataset ds = load_dataset(o.data);
  const auto& labels = require_labels(ds);
  if (!d.values.square() || d.values.rows() != labels.size()) {
    throw ConfigError("matrix must be the square self-distance matrix of the "
                      "labelled dataset");
  }
  json report{{"k", o.k},
              {"n", labels.size()},
              {"accuracy", knn_loo_accuracy(d.values, labels, o.k)},
              {"majority_rate", majority_rate(labels)},
              {"protocol", "leave-one-out"},
              {"config", config_to_json(d.config)}};
  emit_json(report, o.out);
  return 0;
}

int cmd_cluster(const ClusterOptions& o) {
  const DistanceMatrix d = read_matrix_csv(o.matrix);
  const Clustering c = kmedoids(d.values, o.k, o.seed, o.max_iter);
  json report{{"k", o.k},
              {"seed", o.seed},
              {"cost", c.cost},
              {"iterations", c.iterations},
              {"medoids", c.medoids},
              {"config", config_to_json(d.config)}};
  if (o.data) {
    const GraphDataset ds = load_dataset(*o.data);
    const auto& labels = require_labels(ds);
    if (labels.size() != c.assignment.size()) {
      throw ConfigError("label count does not match matrix size");
    }
    std::vector<int> pred(c.assignment.begin(), c.assignment.end());
    report["nmi"] = nmi(labels, pred);
    report["completeness"] = completeness_score(labels, pred);
  }
  if (!o.assignments.empty()) {
    std::string csv = "graph_id,cluster_id\n";
    for (std::size_t i = 0; i < c.assignment.size(); ++i) {
      csv += d.row_ids[i] + "," + std::to_string(c.assignment[i]) + "\n";
    }
    write_text_file(o.assignments, csv);
  }
  emit_json(report, o.out);
  return 0;
}

int cmd_shift(const ShiftOptions& o) {
  const TmdConfig cfg = make_config(o.dist);
  const GraphDataset train = load_dataset(o.train, o.dist.standardize);
  std::vector<GraphDataset> tests;
  for (const auto& t : o.tests) tests.push_back(load_dataset(parse_ref(t), o.dist.standardize));
  warn_zero_features(train);
  for (const auto& t : tests) warn_zero_features(t);
  const ShiftReport r = shift_report(train, tests, cfg, o.lipschitz,
                                     thread_count(o.dist.threads), o.display_max);
  emit_json(shift_report_to_json(r), o.out);
  return 0;
}

int cmd_lipschitz(const LipschitzOptions& o) {
  GraphDataset graphs;
  if (o.data) {
    graphs = load_dataset(*o.data);
  } else {
    if (o.graph_a.empty() || o.graph_b.empty()) {
      throw ConfigError("give --graph-a and --graph-b, or --data");
    }
    graphs.graphs = {read_graph_json(o.graph_a), read_graph_json(o.graph_b)};
  }
  graphs.validate();
  GinModel model;
  json model_info;
  if (!o.model.empty()) {
    model = read_model_json(o.model);
    model_info = {{"source", o.model}};
  } else {
    model = random_gin(graphs.feature_dim(), o.hidden, o.layers, o.seed,
                       parse_aggregation(o.aggregation), 1, o.epsilon);
    model_info = {{"source", "random"},     {"layers", o.layers},
                  {"hidden", o.hidden},     {"seed", o.seed},
                  {"epsilon", o.epsilon},   {"aggregation", o.aggregation}};
  }
  model_info["lipschitz"] = model.lipschitz;
  model_info["bias_free"] = model.bias_free();

  if (!o.data) {
    const LipschitzReport r = lipschitz_check(model, graphs.graphs[0], graphs.graphs[1]);
    emit_json({{"lhs", r.lhs},
               {"rhs", r.rhs},
               {"ratio", r.ratio},
               {"tmd", r.tmd},
               {"lipschitz_product", r.lipschitz_product},
               {"holds", r.holds},
               {"certified", r.certified},
               {"model", model_info},
               {"config", config_to_json(r.config)}},
              o.out);
    return 0;
  }

  // Dataset mode: sampled pairs, correlation between output gap and TMD.
  const std::size_t n = graphs.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::mt19937_64 rng(o.seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  if (pairs.size() > o.pairs) pairs.resize(o.pairs);
  std::sort(pairs.begin(), pairs.end());
  if (pairs.empty()) throw ConfigError("dataset needs at least two graphs");

  std::vector<double> gaps, dists;
  std::size_t violations = 0;
  for (auto [i, j] : pairs) {
    const LipschitzReport r = lipschitz_check(model, graphs.graphs[i], graphs.graphs[j]);
    gaps.push_back(r.lhs);
    dists.push_back(r.tmd);
    if (!r.holds) ++violations;
  }
  json report{{"pairs", pairs.size()},
              {"lipschitz_product", model.lipschitz_product()},
              {"violations", violations},
              {"model", model_info},
              {"config", config_to_json(lipschitz_config(model))}};
  try {
    report["pearson_r"] = pearson_r(gaps, dists);
  } catch (const std::invalid_argument&) {
    report["pearson_r"] = nullptr;
  }
  try {
    report["empirical_lipschitz"] = empirical_lipschitz(gaps, dists);
  } catch (const std::invalid_argument&) {
    report["empirical_lipschitz"] = nullptr;
  }
  emit_json(report, o.out);
  return 0;
}

namespace {

json perturbation_json(const PerturbationReport& r) {
  return {{"bound", r.bound},
          {"exact_tmd", r.exact_tmd},
          {"gap", r.bound - r.exact_tmd},
          {"widths", r.widths},
          {"lambdas", r.lambdas},
          {"holds", r.holds}};
}

}  // namespace

int cmd_perturb(const PerturbOptions& o) {
  const AttributedGraph g = read_graph_json(o.graph);
  TmdConfig cfg;
  cfg.depth = o.depth;
  cfg.schedule = WeightSchedule::parse(o.weights);
  cfg.validate();
  json base{{"kind", o.kind}, {"config", config_to_json(cfg)}};

  if (o.trials == 0) {
    PerturbationReport r;
    if (o.kind == "node-drop") {
      if (!o.node) throw ConfigError("node-drop needs --node");
      r = node_drop_bound(g, *o.node, cfg);
    } else if (o.kind == "edge-drop") {
      if (o.edge.size() != 2) throw ConfigError("edge-drop needs --edge u,v");
      r = edge_drop_bound(g, o.edge[0], o.edge[1], cfg);
    } else if (o.kind == "feature") {
      if (!o.node) throw ConfigError("feature needs --node");
      r = node_perturbation_bound(g, *o.node, o.feature, cfg);
    } else {
      throw ConfigError("unknown perturbation kind '" + o.kind + "'");
    }
    json out = perturbation_json(r);
    out.update(base);
    emit_json(out, o.out);
    return 0;
  }

  // Random single edits of the requested kind, reproducible through --seed.
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::size_t violations = 0, done = 0;
  double max_ratio = 0.0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    if (g.node_count() == 0) break;
    const NodeId v = std::uniform_int_distribution<NodeId>(0, g.node_count() - 1)(rng);
    PerturbationReport r;
    if (o.kind == "node-drop") {
      r = node_drop_bound(g, v, cfg);
    } else if (o.kind == "edge-drop") {
      if (g.edge_count() == 0) break;
      const auto& e = g.edges()[std::uniform_int_distribution<std::size_t>(
          0, g.edge_count() - 1)(rng)];
      r = edge_drop_bound(g, e.first, e.second, cfg);
    } else if (o.kind == "feature") {
      auto x = g.feature(v);
      std::vector<double> y(x.begin(), x.end());
      for (auto& c : y) c += noise(rng);
      r = node_perturbation_bound(g, v, y, cfg);
    } else {
      throw ConfigError("unknown perturbation kind '" + o.kind + "'");
    }
    ++done;
    if (!r.holds) ++violations;
    if (r.bound > 0.0) max_ratio = std::max(max_ratio, r.exact_tmd / r.bound);
  }
  json out{{"trials", done},
           {"violations", violations},
           {"max_exact_over_bound", max_ratio},
           {"seed", o.seed}};
  out.update(base);
  emit_json(out, o.out);
  return 0;
}

int cmd_wl(const WlOptions& o) {
  const AttributedGraph a = read_graph_json(o.graph_a);
  const AttributedGraph b = read_graph_json(o.graph_b);
  const WlResult r = wl_refine(a, b, o.iterations);
  json out{{"distinguishable", r.distinguishable},
           {"iteration", r.iteration ? json(*r.iteration) : json()},
           {"iterations", o.iterations}};
  emit_json(out, o.out);
  return 0;
}

}  // namespace tmd::cli
