// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
//
// tmd: Tree Mover's Distance toolkit.
//
// Exit codes: 0 success, 1 malformed input or arguments, 2 file access,
// 3 inconsistent configuration, 4 internal error.

#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "tmd/error.hpp"

namespace {

using namespace tmd::cli;

void add_distance_flags(CLI::App* cmd, DistanceFlags& f) {
  cmd->add_option("--depth,-L", f.depth, "computation tree depth")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--weights", f.weights,
                  "constant:c | pascal:L[,eps] | values:w1,w2,...");
  cmd->add_option("--mode", f.mode, "sum or mean")
      ->check(CLI::IsMember({"sum", "mean"}));
  cmd->add_option("--threads", f.threads,
                  "worker threads (default: $TMD_THREADS or all cores)");
  cmd->add_flag("--standardize", f.standardize,
                "standardize continuous node attributes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree Mover's Distance between attributed graphs"};
  app.require_subcommand(1);

  DistOptions dist;
  std::string dist_name_b;
  auto* c_dist = app.add_subcommand("dist", "pairwise TMD matrix as CSV");
  c_dist->add_option("--data", dist.data.path, "TUDataset directory or JSON")
      ->required();
  c_dist->add_option("--name", dist.data.name, "TUDataset file prefix");
  auto* data_b = c_dist->add_option("--data-b", "second dataset (rows x cols)");
  c_dist->add_option("--name-b", dist_name_b, "prefix for --data-b");
  add_distance_flags(c_dist, dist.dist);
  c_dist->add_option("--out,-o", dist.out, "output file (default stdout)");

  GramOptions gram;
  auto* c_gram = app.add_subcommand("gram", "kernel exp(-gamma * TMD)");
  c_gram->add_option("--matrix", gram.matrix, "distance CSV")->required();
  c_gram->add_option("--gamma", gram.gamma)->check(CLI::PositiveNumber);
  c_gram->add_option("--out,-o", gram.out);

  KnnOptions knn;
  auto* c_knn = app.add_subcommand("knn", "leave-one-out k-NN accuracy");
  c_knn->add_option("--matrix", knn.matrix, "self-distance CSV")->required();
  c_knn->add_option("--data", knn.data.path, "dataset providing labels")
      ->required();
  c_knn->add_option("--name", knn.data.name);
  c_knn->add_option("--k", knn.k)->check(CLI::PositiveNumber);
  c_knn->add_option("--out,-o", knn.out);

  ClusterOptions cluster;
  std::string cluster_data, cluster_name;
  auto* c_cluster = app.add_subcommand("cluster", "k-medoids clustering");
  c_cluster->add_option("--matrix", cluster.matrix)->required();
  c_cluster->add_option("--k", cluster.k)->check(CLI::PositiveNumber);
  c_cluster->add_option("--seed", cluster.seed);
  c_cluster->add_option("--max-iter", cluster.max_iter);
  c_cluster->add_option("--data", cluster_data, "labels for NMI/completeness");
  c_cluster->add_option("--name", cluster_name);
  c_cluster->add_option("--assignments", cluster.assignments,
                        "CSV of graph_id,cluster_id");
  c_cluster->add_option("--out,-o", cluster.out);

  ShiftOptions shift;
  auto* c_shift = app.add_subcommand("shift", "W1 distribution-shift report");
  c_shift->add_option("--train", shift.train.path)->required();
  c_shift->add_option("--train-name", shift.train.name);
  c_shift->add_option("--test", shift.tests, "test dataset, repeatable; "
                                             "DIR:NAME selects a prefix")
      ->required();
  add_distance_flags(c_shift, shift.dist);
  c_shift->add_option("--lipschitz", shift.lipschitz,
                      "model Lipschitz constant K for the 2*K*W1 term");
  c_shift->add_option("--display-max", shift.display_max,
                      "rescale W1 for display so the largest equals this");
  c_shift->add_option("--out,-o", shift.out);

  LipschitzOptions lip;
  std::string lip_data, lip_name;
  auto* c_lip = app.add_subcommand("lipschitz", "check the GNN Lipschitz bound");
  c_lip->add_option("--model", lip.model, "model JSON (default: random)");
  c_lip->add_option("--layers", lip.layers)->check(CLI::PositiveNumber);
  c_lip->add_option("--hidden", lip.hidden)->check(CLI::PositiveNumber);
  c_lip->add_option("--aggregation", lip.aggregation)
      ->check(CLI::IsMember({"sum", "mean"}));
  c_lip->add_option("--epsilon", lip.epsilon)->check(CLI::PositiveNumber);
  c_lip->add_option("--seed", lip.seed);
  c_lip->add_option("--graph-a", lip.graph_a);
  c_lip->add_option("--graph-b", lip.graph_b);
  c_lip->add_option("--data", lip_data, "dataset for a correlation study");
  c_lip->add_option("--name", lip_name);
  c_lip->add_option("--pairs", lip.pairs);
  c_lip->add_option("--out,-o", lip.out);

  PerturbOptions pert;
  auto* c_pert = app.add_subcommand("perturb", "perturbation bounds");
  c_pert->add_option("--graph", pert.graph, "graph JSON")->required();
  c_pert->add_option("--kind", pert.kind)
      ->check(CLI::IsMember({"node-drop", "edge-drop", "feature"}));
  c_pert->add_option("--node", pert.node);
  c_pert->add_option("--edge", pert.edge)->delimiter(',')->expected(2);
  c_pert->add_option("--feature", pert.feature)->delimiter(',');
  c_pert->add_option("--trials", pert.trials, "random edits instead of one");
  c_pert->add_option("--depth,-L", pert.depth)->check(CLI::PositiveNumber);
  c_pert->add_option("--weights", pert.weights);
  c_pert->add_option("--seed", pert.seed);
  c_pert->add_option("--out,-o", pert.out);

  WlOptions wl;
  auto* c_wl = app.add_subcommand("wl", "1-WL distinguishability");
  c_wl->add_option("--graph-a", wl.graph_a)->required();
  c_wl->add_option("--graph-b", wl.graph_b)->required();
  c_wl->add_option("--iterations", wl.iterations);
  c_wl->add_option("--out,-o", wl.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*c_dist) {
      if (*data_b) dist.data_b = DataRef{data_b->as<std::string>(), dist_name_b};
      return cmd_dist(dist);
    }
    if (*c_gram) return cmd_gram(gram);
    if (*c_knn) return cmd_knn(knn);
    if (*c_cluster) {
      if (!cluster_data.empty()) cluster.data = DataRef{cluster_data, cluster_name};
      return cmd_cluster(cluster);
    }
    if (*c_shift) return cmd_shift(shift);
    if (*c_lip) {
      if (!lip_data.empty()) lip.data = DataRef{lip_data, lip_name};
      return cmd_lipschitz(lip);
    }
    if (*c_pert) return cmd_perturb(pert);
    if (*c_wl) return cmd_wl(wl);
  } catch (const tmd::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tmd::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tmd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
