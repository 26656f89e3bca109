// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "tmd/error.hpp"
#include "tmd/graph_io.hpp"
#include "tmd/ot.hpp"

namespace tmd {
namespace {

struct PairTask {
  std::size_t i, j;
};

// Runs `work(task)` over all tasks; each task writes disjoint output cells.
template <typename Work>
void run_tasks(const std::vector<PairTask>& tasks, std::size_t threads,
               Work work) {
  threads = std::max<std::size_t>(1, std::min(threads, tasks.size()));
  if (threads == 1) {
    for (const auto& t : tasks) work(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < tasks.size(); k = next++) {
        try {
          work(tasks[k]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = tasks.size();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::string> ids_for(const GraphDataset& ds) {
  std::vector<std::string> ids;
  ids.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ids.push_back(ds.name + "/" + std::to_string(i));
  }
  return ids;
}

void check_dims(const GraphDataset& a, const GraphDataset& b) {
  if (!a.graphs.empty() && !b.graphs.empty() &&
      a.feature_dim() != b.feature_dim()) {
    throw ConfigError("datasets '" + a.name + "' and '" + b.name +
                      "' have feature dimensions " +
                      std::to_string(a.feature_dim()) + " and " +
                      std::to_string(b.feature_dim()));
  }
}

bool dataset_less(const GraphDataset& a, const GraphDataset& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (canonical_less(a.graphs[i], b.graphs[i])) return true;
    if (canonical_less(b.graphs[i], a.graphs[i])) return false;
  }
  return false;
}

}  // namespace

std::size_t default_thread_count() {
  if (const char* env = std::getenv("TMD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

DistanceMatrix pairwise_tmd(const GraphDataset& a, const GraphDataset& b,
                            const TmdConfig& cfg, std::size_t threads) {
  cfg.validate();
  check_dims(a, b);
  DistanceMatrix d{Matrix(a.size(), b.size()), ids_for(a), ids_for(b), cfg};
  std::vector<PairTask> tasks;
  tasks.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) tasks.push_back({i, j});
  }
  run_tasks(tasks, threads, [&](const PairTask& t) {
    d.values(t.i, t.j) = tmd(a.graphs[t.i], b.graphs[t.j], cfg);
  });
  return d;
}

DistanceMatrix pairwise_tmd(const GraphDataset& ds, const TmdConfig& cfg,
                            std::size_t threads) {
  cfg.validate();
  check_dims(ds, ds);
  DistanceMatrix d{Matrix(ds.size(), ds.size()), ids_for(ds), ids_for(ds), cfg};
  std::vector<PairTask> tasks;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = i + 1; j < ds.size(); ++j) tasks.push_back({i, j});
  }
  run_tasks(tasks, threads, [&](const PairTask& t) {
    const double v = tmd(ds.graphs[t.i], ds.graphs[t.j], cfg);
    d.values(t.i, t.j) = v;
    d.values(t.j, t.i) = v;
  });
  return d;
}

nlohmann::json config_to_json(const TmdConfig& cfg) {
  return {{"depth", cfg.depth},
          {"weights", cfg.schedule.describe()},
          {"mode", to_string(cfg.mode)}};
}

TmdConfig config_from_json(const nlohmann::json& j) {
  TmdConfig cfg;
  try {
    cfg.depth = j.at("depth").get<std::size_t>();
    cfg.schedule = WeightSchedule::parse(j.at("weights").get<std::string>());
    cfg.mode = parse_aggregation(j.at("mode").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

std::string matrix_to_csv(const DistanceMatrix& d) {
  nlohmann::json header = config_to_json(d.config);
  header["row_ids"] = d.row_ids;
  header["col_ids"] = d.col_ids;
  std::ostringstream out;
  out << "# config:" << header.dump() << "\n";
  for (std::size_t i = 0; i < d.values.rows(); ++i) {
    for (std::size_t j = 0; j < d.values.cols(); ++j) {
      out << (j ? "," : "") << format_double(d.values(i, j));
    }
    out << "\n";
  }
  return out.str();
}

DistanceMatrix matrix_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  DistanceMatrix d;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# config:", 0) == 0 && number == 1) {
      try {
        const auto j = nlohmann::json::parse(line.substr(9));
        d.config = config_from_json(j);
        d.row_ids = j.value("row_ids", std::vector<std::string>{});
        d.col_ids = j.value("col_ids", std::vector<std::string>{});
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad CSV header: ") + e.what());
      }
      have_header = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) {
        throw ParseError("CSV line " + std::to_string(number) +
                         ": bad number '" + cell + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("CSV line " + std::to_string(number) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  const std::size_t m = n ? rows.front().size() : 0;
  d.values = Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) d.values(i, j) = rows[i][j];
  }
  if (!have_header || d.row_ids.size() != n || d.col_ids.size() != m) {
    d.row_ids.clear();
    d.col_ids.clear();
    for (std::size_t i = 0; i < n; ++i) d.row_ids.push_back(std::to_string(i));
    for (std::size_t j = 0; j < m; ++j) d.col_ids.push_back(std::to_string(j));
  }
  return d;
}

void write_matrix_csv(const DistanceMatrix& d, const std::filesystem::path& p) {
  write_text_file(p, matrix_to_csv(d));
}

DistanceMatrix read_matrix_csv(const std::filesystem::path& p) {
  return matrix_from_csv(read_text_file(p));
}

Matrix gram_matrix(const DistanceMatrix& d, double gamma) {
  if (!d.values.square()) {
    throw std::invalid_argument("gram matrix needs a square distance matrix");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be positive");
  }
  const std::size_t n = d.values.rows();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      k(i, j) = i == j ? 1.0 : std::exp(-gamma * d.values(i, j));
    }
  }
  return k;
}

double w1_from_distances(const Matrix& d) {
  const std::size_t na = d.rows();
  const std::size_t nb = d.cols();
  if (na == 0 || nb == 0) throw std::invalid_argument("empty dataset");
  // Integer masses nb per row and na per column keep marginals exact.
  const std::vector<double> rows(na, static_cast<double>(nb));
  const std::vector<double> cols(nb, static_cast<double>(na));
  return solve_transport(d, rows, cols).cost /
         (static_cast<double>(na) * static_cast<double>(nb));
}

double dataset_w1(const GraphDataset& a, const GraphDataset& b,
                  const TmdConfig& cfg, std::size_t threads) {
  if (a.graphs.empty() || b.graphs.empty()) {
    throw std::invalid_argument("W1 needs non-empty datasets");
  }
  if (dataset_less(b, a)) return dataset_w1(b, a, cfg, threads);
  return w1_from_distances(pairwise_tmd(a, b, cfg, threads).values);
}

ShiftReport shift_report(const GraphDataset& train,
                         const std::vector<GraphDataset>& tests,
                         const TmdConfig& cfg,
                         std::optional<double> lipschitz_product,
                         std::size_t threads,
                         std::optional<double> display_max) {
  if (train.graphs.empty() || tests.empty()) {
    throw std::invalid_argument("shift report needs a training set and tests");
  }
  ShiftReport r{train.name, {}, cfg, lipschitz_product};
  for (const auto& test : tests) {
    ShiftEntry e;
    e.test = test.name;
    e.w1 = dataset_w1(train, test, cfg, threads);
    if (lipschitz_product) e.risk_gap = 2.0 * *lipschitz_product * e.w1;
    r.entries.push_back(std::move(e));
  }
  std::stable_sort(r.entries.begin(), r.entries.end(),
                   [](const auto& x, const auto& y) { return x.w1 < y.w1; });
  if (display_max) {
    const double top = r.entries.back().w1;
    for (auto& e : r.entries) {
      e.display = top > 0.0 ? e.w1 * *display_max / top : 0.0;
    }
  }
  return r;
}

nlohmann::json shift_report_to_json(const ShiftReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    nlohmann::json j{{"test", e.test}, {"w1", e.w1}};
    j["risk_gap"] = e.risk_gap ? nlohmann::json(*e.risk_gap) : nlohmann::json();
    if (e.display) j["display"] = *e.display;
    entries.push_back(j);
  }
  nlohmann::json out{{"train", r.train},
                     {"entries", entries},
                     {"config", config_to_json(r.config)}};
  if (r.lipschitz_product) out["lipschitz_product"] = *r.lipschitz_product;
  return out;
}

}  // namespace tmd
