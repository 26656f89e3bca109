// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "tmd/matrix.hpp"

namespace tmd {

// Ground costs between two finite multisets; entries must be finite and >= 0.
using CostMatrix = Matrix;

// perm[i] is the column matched to row i.
using Permutation = std::vector<std::size_t>;

struct FlowEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double mass = 0.0;

  bool operator==(const FlowEntry&) const = default;
};

struct TransportPlan {
  double cost = 0.0;
  std::variant<Permutation, std::vector<FlowEntry>> coupling;
  // True when `cost` has been divided by the multiset size.
  bool normalized = false;

  const Permutation& permutation() const {
    return std::get<Permutation>(coupling);
  }
  const std::vector<FlowEntry>& flow() const {
    return std::get<std::vector<FlowEntry>>(coupling);
  }
};

// Throws std::invalid_argument on negative or non-finite entries.
void validate_costs(const CostMatrix& c);

// Minimum of sum_i C[i][perm[i]] over permutations. Among optimal
// permutations the lexicographically smallest one is returned, so plans are
// reproducible. A 0x0 input yields cost 0 and an empty permutation.
TransportPlan solve_assignment(const CostMatrix& c);

// Exact discrete transport between arbitrary non-negative marginals with equal
// totals (within 1e-9 relative). Network simplex on the transportation tableau
// with Bland's rule; the returned flow lists the strictly positive cells in
// row-major order.
TransportPlan solve_transport(const CostMatrix& c,
                              std::span<const double> row_mass,
                              std::span<const double> col_mass);

// OT between two multisets padded with blank elements to a common size.
// row_norms[i] is the cost of sending row element i to a blank, col_norms[j]
// likewise; blank-to-blank costs 0. With `normalized` the cost is divided by
// the padded size max(m, n).
TransportPlan augmented_ot(const CostMatrix& core,
                           std::span<const double> row_norms,
                           std::span<const double> col_norms, bool normalized);

// Wasserstein-1 between the uniform distributions on the two multisets. An
// empty side stands for a point mass on the blank element, so the result is
// the mean norm of the other side.
double uniform_ot(const CostMatrix& core, std::span<const double> row_norms,
                  std::span<const double> col_norms);

// Reusable Hungarian solver for the inner loops of the tree-distance DP.
// Returns the optimal cost only, without canonicalizing the permutation.
class AssignmentSolver {
 public:
  // `costs` is an n x n row-major block.
  double min_cost(std::span<const double> costs, std::size_t n);

  // Permutation found by the last call.
  std::span<const std::size_t> last_permutation() const noexcept {
    return assignment_;
  }

  // Optimal dual variables of the last call: u[i] + v[j] <= C[i][j] with
  // equality on the returned permutation.
  std::span<const double> row_potentials() const noexcept {
    return u_.empty() ? std::span<const double>{}
                      : std::span<const double>(u_).subspan(1);
  }
  std::span<const double> col_potentials() const noexcept {
    return v_.empty() ? std::span<const double>{}
                      : std::span<const double>(v_).subspan(1);
  }

 private:
  std::vector<double> u_, v_, minv_;
  std::vector<std::size_t> p_, way_, assignment_;
  std::vector<char> used_;
};

}  // namespace tmd
