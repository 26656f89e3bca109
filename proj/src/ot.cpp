// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/ot.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tmd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_entry(std::span<const double> values) {
  double m = 0.0;
  for (double x : values) m = std::max(m, x);
  return m;
}

void validate_masses(std::span<const double> mass, const char* side) {
  for (double x : mass) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument(std::string(side) +
                                  " masses must be finite and non-negative");
    }
  }
}

// Lexicographically smallest perfect matching among the tight cells of the
// reduced cost matrix, starting from an optimal matching `row_match`.
Permutation canonical_matching(const CostMatrix& c, std::span<const double> u,
                               std::span<const double> v,
                               Permutation row_match) {
  const std::size_t n = c.rows();
  const double tol = 1e-12 * (1.0 + max_entry(c.values()));
  std::vector<std::vector<std::size_t>> tight(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (c(i, j) - u[i] - v[j] <= tol || row_match[i] == j) {
        tight[i].push_back(j);
      }
    }
  }
  std::vector<std::size_t> col_match(n);
  for (std::size_t i = 0; i < n; ++i) col_match[row_match[i]] = i;

  std::vector<char> col_fixed(n, 0);
  std::vector<char> visited(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : tight[i]) {
      if (col_fixed[j]) continue;
      if (row_match[i] == j) break;
      // Give column j to row i; the displaced row must reach the column that
      // row i releases through an alternating path over unfixed rows.
      const std::size_t released = row_match[i];
      std::fill(visited.begin(), visited.end(), 0);
      std::function<bool(std::size_t)> augment = [&](std::size_t r) -> bool {
        for (std::size_t col : tight[r]) {
          if (col_fixed[col] || col == j || visited[col]) continue;
          visited[col] = 1;
          if (col == released || augment(col_match[col])) {
            col_match[col] = r;
            row_match[r] = col;
            return true;
          }
        }
        return false;
      };
      if (augment(col_match[j])) {
        row_match[i] = j;
        col_match[j] = i;
        break;
      }
    }
    col_fixed[row_match[i]] = 1;
  }
  return row_match;
}

}  // namespace

void validate_costs(const CostMatrix& c) {
  for (double x : c.values()) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument(
          "cost matrix entries must be finite and non-negative");
    }
  }
}

double AssignmentSolver::min_cost(std::span<const double> costs,
                                  std::size_t n) {
  if (costs.size() != n * n) {
    throw std::invalid_argument("cost block size does not match n*n");
  }
  assignment_.assign(n, 0);
  if (n == 0) {
    u_.clear();
    v_.clear();
    return 0.0;
  }

  // Shortest augmenting paths with potentials, 1-based with a sentinel
  // column 0.
  u_.assign(n + 1, 0.0);
  v_.assign(n + 1, 0.0);
  p_.assign(n + 1, 0);
  way_.assign(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p_[0] = i;
    std::size_t j0 = 0;
    minv_.assign(n + 1, kInf);
    used_.assign(n + 1, 0);
    do {
      used_[j0] = 1;
      const std::size_t i0 = p_[j0];
      const double* row = costs.data() + (i0 - 1) * n;
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used_[j]) continue;
        const double cur = row[j - 1] - u_[i0] - v_[j];
        if (cur < minv_[j]) {
          minv_[j] = cur;
          way_[j] = j0;
        }
        if (minv_[j] < delta) {
          delta = minv_[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used_[j]) {
          u_[p_[j]] += delta;
          v_[j] -= delta;
        } else {
          minv_[j] -= delta;
        }
      }
      j0 = j1;
    } while (p_[j0] != 0);
    do {
      const std::size_t j1 = way_[j0];
      p_[j0] = p_[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= n; ++j) assignment_[p_[j] - 1] = j - 1;

  double cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) cost += costs[i * n + assignment_[i]];
  return cost;
}

TransportPlan solve_assignment(const CostMatrix& c) {
  if (!c.square()) {
    throw std::invalid_argument("assignment requires a square cost matrix, got " +
                                std::to_string(c.rows()) + "x" +
                                std::to_string(c.cols()));
  }
  validate_costs(c);
  const std::size_t n = c.rows();
  AssignmentSolver solver;
  solver.min_cost(c.values(), n);
  Permutation found(solver.last_permutation().begin(),
                    solver.last_permutation().end());

  std::vector<double> u(solver.row_potentials().begin(),
                        solver.row_potentials().end());
  std::vector<double> v(solver.col_potentials().begin(),
                        solver.col_potentials().end());

  TransportPlan plan;
  Permutation perm = canonical_matching(c, u, v, std::move(found));
  for (std::size_t i = 0; i < n; ++i) plan.cost += c(i, perm[i]);
  plan.coupling = std::move(perm);
  return plan;
}

TransportPlan solve_transport(const CostMatrix& c,
                              std::span<const double> row_mass,
                              std::span<const double> col_mass) {
  validate_costs(c);
  const std::size_t m = c.rows();
  const std::size_t n = c.cols();
  if (row_mass.size() != m || col_mass.size() != n) {
    throw std::invalid_argument("marginal lengths do not match cost matrix");
  }
  validate_masses(row_mass, "row");
  validate_masses(col_mass, "column");
  const double total_a = std::accumulate(row_mass.begin(), row_mass.end(), 0.0);
  const double total_b = std::accumulate(col_mass.begin(), col_mass.end(), 0.0);
  if (std::abs(total_a - total_b) > 1e-9 * std::max(1.0, total_a)) {
    throw std::invalid_argument("marginal masses differ: " +
                                std::to_string(total_a) + " vs " +
                                std::to_string(total_b));
  }

  TransportPlan plan;
  plan.coupling = std::vector<FlowEntry>{};
  if (m == 0 || n == 0) return plan;

  const double mass_tol = 1e-14 * std::max(1.0, total_a);
  const double cost_tol = 1e-12 * (1.0 + max_entry(c.values()));

  // Basic cells of the spanning tree; northwest-corner start gives exactly
  // m + n - 1 of them, some possibly degenerate.
  struct Cell {
    std::size_t i, j;
    double x;
  };
  std::vector<Cell> basis;
  basis.reserve(m + n - 1);
  {
    std::vector<double> ra(row_mass.begin(), row_mass.end());
    std::vector<double> rb(col_mass.begin(), col_mass.end());
    std::size_t i = 0, j = 0;
    while (true) {
      const double x = std::min(ra[i], rb[j]);
      basis.push_back({i, j, x});
      ra[i] -= x;
      rb[j] -= x;
      if (i == m - 1 && j == n - 1) break;
      if (i == m - 1) {
        ++j;
      } else if (j == n - 1) {
        ++i;
      } else if (ra[i] <= rb[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  std::vector<long> cell_index(m * n, -1);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    cell_index[basis[k].i * n + basis[k].j] = static_cast<long>(k);
  }

  const std::size_t nodes = m + n;
  std::vector<double> potential(nodes);
  std::vector<std::vector<std::size_t>> incident(nodes);
  std::vector<long> parent_cell(nodes);
  std::vector<std::size_t> queue;
  queue.reserve(nodes);

  // Roots the basis tree at `root`, filling parent_cell for every node.
  auto root_tree = [&](std::size_t root) {
    for (auto& list : incident) list.clear();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      incident[basis[k].i].push_back(k);
      incident[m + basis[k].j].push_back(k);
    }
    std::fill(parent_cell.begin(), parent_cell.end(), -2);
    parent_cell[root] = -1;
    queue.assign(1, root);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t node = queue[head];
      for (std::size_t k : incident[node]) {
        const std::size_t other =
            node < m ? m + basis[k].j : basis[k].i;
        if (parent_cell[other] != -2) continue;
        parent_cell[other] = static_cast<long>(k);
        queue.push_back(other);
      }
    }
  };

  const std::size_t max_iter = 50 * nodes * nodes + 1000;
  std::size_t iter = 0;
  for (;; ++iter) {
    if (iter > max_iter) {
      throw std::runtime_error("transport simplex exceeded iteration limit");
    }
    // Potentials u_i + v_j = c_ij on basic cells, u_0 = 0.
    root_tree(0);
    potential[0] = 0.0;
    for (std::size_t h = 1; h < queue.size(); ++h) {
      const std::size_t node = queue[h];
      const Cell& cell = basis[static_cast<std::size_t>(parent_cell[node])];
      potential[node] = node < m ? c(cell.i, cell.j) - potential[m + cell.j]
                                 : c(cell.i, cell.j) - potential[cell.i];
    }

    // Bland: first improving cell in row-major order enters.
    std::size_t ei = m, ej = n;
    for (std::size_t i = 0; i < m && ei == m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (cell_index[i * n + j] >= 0) continue;
        if (c(i, j) - potential[i] - potential[m + j] < -cost_tol) {
          ei = i;
          ej = j;
          break;
        }
      }
    }
    if (ei == m) break;

    // Cycle: entering cell plus the tree path from column ej to row ei.
    root_tree(ei);
    std::vector<std::size_t> path;
    for (std::size_t node = m + ej; node != ei;) {
      const auto k = static_cast<std::size_t>(parent_cell[node]);
      path.push_back(k);
      node = node < m ? m + basis[k].j : basis[k].i;
    }
    // Cells at even positions of `path` lose flow.
    double theta = kInf;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      theta = std::min(theta, basis[path[p]].x);
    }
    std::size_t leaving = basis.size();
    std::size_t leaving_key = m * n;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const Cell& cell = basis[path[p]];
      const std::size_t key = cell.i * n + cell.j;
      if (cell.x - theta <= mass_tol && key < leaving_key) {
        leaving = path[p];
        leaving_key = key;
      }
    }
    for (std::size_t p = 0; p < path.size(); ++p) {
      basis[path[p]].x += (p % 2 == 0) ? -theta : theta;
    }
    cell_index[leaving_key] = -1;
    basis[leaving] = {ei, ej, theta};
    cell_index[ei * n + ej] = static_cast<long>(leaving);
  }

  std::vector<FlowEntry> flow;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const long k = cell_index[i * n + j];
      if (k < 0) continue;
      const double x = std::max(0.0, basis[static_cast<std::size_t>(k)].x);
      if (x <= mass_tol) continue;
      flow.push_back({i, j, x});
      plan.cost += c(i, j) * x;
    }
  }
  plan.coupling = std::move(flow);
  return plan;
}

TransportPlan augmented_ot(const CostMatrix& core,
                           std::span<const double> row_norms,
                           std::span<const double> col_norms, bool normalized) {
  const std::size_t m = core.rows();
  const std::size_t n = core.cols();
  if (row_norms.size() != m || col_norms.size() != n) {
    throw std::invalid_argument("blank-cost vector length does not match");
  }
  const std::size_t size = std::max(m, n);
  CostMatrix padded(size, size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      if (i < m && j < n) {
        padded(i, j) = core(i, j);
      } else if (i < m) {
        padded(i, j) = row_norms[i];
      } else if (j < n) {
        padded(i, j) = col_norms[j];
      }
    }
  }
  TransportPlan plan = solve_assignment(padded);
  if (normalized && size > 0) {
    plan.cost /= static_cast<double>(size);
    plan.normalized = true;
  }
  return plan;
}

double uniform_ot(const CostMatrix& core, std::span<const double> row_norms,
                  std::span<const double> col_norms) {
  const std::size_t m = core.rows();
  const std::size_t n = core.cols();
  if (row_norms.size() != m || col_norms.size() != n) {
    throw std::invalid_argument("blank-cost vector length does not match");
  }
  auto mean = [](std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  };
  if (m == 0 && n == 0) return 0.0;
  if (m == 0) return mean(col_norms);
  if (n == 0) return mean(row_norms);
  validate_costs(core);
  if (m == n) {
    AssignmentSolver solver;
    return solver.min_cost(core.values(), n) / static_cast<double>(n);
  }
  // Integer masses keep the marginals exact; rescale at the end.
  std::vector<double> a(m, static_cast<double>(n));
  std::vector<double> b(n, static_cast<double>(m));
  return solve_transport(core, a, b).cost / static_cast<double>(m * n);
}

}  // namespace tmd
