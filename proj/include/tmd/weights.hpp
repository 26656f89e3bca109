// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tmd {

// Depth-indexed positive weights w(1), w(2), ...
//
// w(d) scales the transport between the children of two trees when those
// children have depth d. A distance at depth L therefore reads w(1)..w(L-1).
class WeightSchedule {
 public:
  enum class Kind { constant, pascal, explicit_values };

  // Constant schedule w = 1.
  WeightSchedule() = default;

  static WeightSchedule constant(double c);
  // w(l) = eps * C(L, l-1) / C(L, l) for 1 <= l <= L.
  static WeightSchedule pascal(std::size_t L, double epsilon = 1.0);
  // w(l) = values[l-1].
  static WeightSchedule from_values(std::vector<double> values);

  // Throws ConfigError when l is 0 or beyond the defined range.
  double at(std::size_t l) const;
  // Largest depth with a defined weight; 0 means unbounded (constant).
  std::size_t defined_up_to() const noexcept;
  bool covers(std::size_t max_l) const noexcept;

  Kind kind() const noexcept { return kind_; }
  double epsilon() const noexcept { return epsilon_; }
  // "constant:0.5", "pascal:4,1" or "values:a,b,...", accepted by parse().
  std::string describe() const;
  static WeightSchedule parse(const std::string& text);

  bool operator==(const WeightSchedule&) const = default;

 private:
  Kind kind_ = Kind::constant;
  double constant_ = 1.0;
  double epsilon_ = 1.0;
  std::size_t levels_ = 0;
  std::vector<double> values_;
};

inline WeightSchedule constant_weights(double c) {
  return WeightSchedule::constant(c);
}
inline WeightSchedule pascal_weights(std::size_t L, double epsilon = 1.0) {
  return WeightSchedule::pascal(L, epsilon);
}

// Weights for models whose neighbor branch has its own Lipschitz constant
// k[l-1] at layer l instead of a shared epsilon:
// w(l) = e_{L-l+1}(k) / e_{L-l}(k), with e_j the elementary symmetric
// polynomial of degree j over the L layer constants. Equal constants give the
// Pascal schedule.
WeightSchedule lipschitz_weights(std::span<const double> neighbor_lipschitz);

// Coefficients multiplying the level-l terms of the drop and perturbation
// bounds for depth-L trees: lambda_1 = 1, lambda_l = prod_{j<l} w(L - j).
std::vector<double> level_coefficients(const WeightSchedule& w, std::size_t L);

}  // namespace tmd
