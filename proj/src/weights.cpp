// Copyright (c) tmd contributors.
// SPDX-License-Identifier: Apache-2.0
#include "tmd/weights.hpp"

#include <cmath>
#include <sstream>

#include "tmd/error.hpp"
#include "tmd/graph_io.hpp"

namespace tmd {
namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ConfigError(std::string(what) + " must be positive and finite");
  }
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse weight value '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("cannot parse weight value '" + s + "'");
  return x;
}

}  // namespace

WeightSchedule WeightSchedule::constant(double c) {
  require_positive(c, "constant weight");
  WeightSchedule w;
  w.kind_ = Kind::constant;
  w.constant_ = c;
  return w;
}

WeightSchedule WeightSchedule::pascal(std::size_t L, double epsilon) {
  if (L == 0) throw ConfigError("pascal weights need L >= 1");
  require_positive(epsilon, "epsilon");
  WeightSchedule w;
  w.kind_ = Kind::pascal;
  w.epsilon_ = epsilon;
  w.levels_ = L;
  for (std::size_t l = 1; l <= L; ++l) {
    w.values_.push_back(epsilon * binomial(L, l - 1) / binomial(L, l));
  }
  return w;
}

WeightSchedule WeightSchedule::from_values(std::vector<double> values) {
  for (double x : values) require_positive(x, "weight");
  WeightSchedule w;
  w.kind_ = Kind::explicit_values;
  w.levels_ = values.size();
  w.values_ = std::move(values);
  return w;
}

double WeightSchedule::at(std::size_t l) const {
  if (l == 0) throw ConfigError("weight index starts at 1");
  if (kind_ == Kind::constant) return constant_;
  if (l > values_.size()) {
    throw ConfigError("weight w(" + std::to_string(l) +
                      ") is undefined; schedule " + describe() +
                      " covers 1.." + std::to_string(values_.size()));
  }
  return values_[l - 1];
}

std::size_t WeightSchedule::defined_up_to() const noexcept {
  return kind_ == Kind::constant ? 0 : values_.size();
}

bool WeightSchedule::covers(std::size_t max_l) const noexcept {
  return kind_ == Kind::constant || max_l <= values_.size();
}

std::string WeightSchedule::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::constant:
      out << "constant:" << format_double(constant_);
      break;
    case Kind::pascal:
      out << "pascal:" << levels_ << "," << format_double(epsilon_);
      break;
    case Kind::explicit_values:
      out << "values:";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        out << (i ? "," : "") << format_double(values_[i]);
      }
      break;
  }
  return out.str();
}

WeightSchedule WeightSchedule::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  std::vector<std::string> parts;
  {
    std::istringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
  }
  if (kind == "constant" && parts.size() == 1) {
    return constant(parse_real(parts[0]));
  }
  if (kind == "pascal" && (parts.size() == 1 || parts.size() == 2)) {
    const double L = parse_real(parts[0]);
    if (L < 1 || L != std::floor(L)) {
      throw ConfigError("pascal level must be a positive integer");
    }
    const double eps = parts.size() == 2 ? parse_real(parts[1]) : 1.0;
    return pascal(static_cast<std::size_t>(L), eps);
  }
  if (kind == "values" && !parts.empty()) {
    std::vector<double> values;
    for (const auto& p : parts) values.push_back(parse_real(p));
    return from_values(std::move(values));
  }
  throw ConfigError("unrecognized weight schedule '" + text +
                    "' (expected constant:c, pascal:L[,eps] or values:a,b,...)");
}

WeightSchedule lipschitz_weights(std::span<const double> neighbor_lipschitz) {
  const std::size_t L = neighbor_lipschitz.size();
  if (L == 0) throw ConfigError("need at least one layer constant");
  for (double k : neighbor_lipschitz) require_positive(k, "layer constant");
  // e[j] = elementary symmetric polynomial of degree j.
  std::vector<double> e(L + 1, 0.0);
  e[0] = 1.0;
  for (double k : neighbor_lipschitz) {
    for (std::size_t j = L; j >= 1; --j) e[j] += k * e[j - 1];
  }
  std::vector<double> values(L);
  for (std::size_t l = 1; l <= L; ++l) values[l - 1] = e[L - l + 1] / e[L - l];
  return WeightSchedule::from_values(std::move(values));
}

std::vector<double> level_coefficients(const WeightSchedule& w, std::size_t L) {
  std::vector<double> lambda(L, 1.0);
  for (std::size_t l = 2; l <= L; ++l) {
    lambda[l - 1] = lambda[l - 2] * w.at(L - (l - 1));
  }
  return lambda;
}

}  // namespace tmd
