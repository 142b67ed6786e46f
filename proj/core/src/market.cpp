#include "signaling/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signaling/errors.hpp"

namespace signaling {

const char* type_name(Type type) { return type == Type::kLow ? "L" : "H"; }

const char* cost_kind_name(CostKind kind) {
  switch (kind) {
    case CostKind::kLinear:
      return "linear";
    case CostKind::kPower:
      return "power";
    case CostKind::kTabulated:
      return "tabulated";
  }
  return "unknown";
}

namespace {

void require_slope(double kappa, const char* field) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InputError(std::string("field '") + field +
                     "': slope must be positive and finite");
  }
}

void require_table(const std::vector<double>& costs,
                   const std::vector<double>& knots, const char* field) {
  if (costs.size() != knots.size()) {
    throw InputError(std::string("field '") + field +
                     "': length must match the knot list");
  }
  if (costs.front() != 0.0) {
    throw InputError(std::string("field '") + field +
                     "': cost at zero effort must be 0");
  }
  for (std::size_t k = 1; k < costs.size(); ++k) {
    if (!(costs[k] > costs[k - 1]) || !std::isfinite(costs[k])) {
      throw InputError(std::string("field '") + field +
                       "': costs must increase strictly");
    }
  }
}

}  // namespace

CostFamily CostFamily::linear(double kappa_low, double kappa_high) {
  require_slope(kappa_low, "kappa_L");
  require_slope(kappa_high, "kappa_H");
  CostFamily cf;
  cf.kind_ = CostKind::kLinear;
  cf.kappa_low_ = kappa_low;
  cf.kappa_high_ = kappa_high;
  return cf;
}

CostFamily CostFamily::power(double kappa_low, double kappa_high,
                             double exponent) {
  require_slope(kappa_low, "kappa_L");
  require_slope(kappa_high, "kappa_H");
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw InputError("field 'exponent': must be >= 1");
  }
  CostFamily cf;
  cf.kind_ = CostKind::kPower;
  cf.kappa_low_ = kappa_low;
  cf.kappa_high_ = kappa_high;
  cf.exponent_ = exponent;
  return cf;
}

CostFamily CostFamily::tabulated(std::vector<double> knots,
                                 std::vector<double> low_costs,
                                 std::vector<double> high_costs) {
  if (knots.size() < 2) {
    throw InputError("field 'knots': need at least two knots");
  }
  if (knots.front() != 0.0) {
    throw InputError("field 'knots': first knot must be 0");
  }
  for (std::size_t k = 1; k < knots.size(); ++k) {
    if (!(knots[k] > knots[k - 1]) || !std::isfinite(knots[k])) {
      throw InputError("field 'knots': must be strictly ascending and finite");
    }
  }
  require_table(low_costs, knots, "costs_L");
  require_table(high_costs, knots, "costs_H");
  CostFamily cf;
  cf.kind_ = CostKind::kTabulated;
  cf.knots_ = std::move(knots);
  cf.low_costs_ = std::move(low_costs);
  cf.high_costs_ = std::move(high_costs);
  return cf;
}

double CostFamily::kappa(Type type) const {
  return type == Type::kLow ? kappa_low_ : kappa_high_;
}

const std::vector<double>& CostFamily::table(Type type) const {
  return type == Type::kLow ? low_costs_ : high_costs_;
}

double CostFamily::max_effort() const {
  if (kind_ == CostKind::kTabulated) return knots_.back();
  return std::numeric_limits<double>::infinity();
}

double CostFamily::operator()(Type type, double effort) const {
  if (!(effort >= 0.0)) {
    throw DomainError("effort must be nonnegative, got " +
                      std::to_string(effort));
  }
  switch (kind_) {
    case CostKind::kLinear:
      return kappa(type) * effort;
    case CostKind::kPower:
      return kappa(type) * std::pow(effort, exponent_);
    case CostKind::kTabulated: {
      if (effort > knots_.back()) {
        throw RangeError("effort " + std::to_string(effort) +
                         " beyond the last tabulated knot " +
                         std::to_string(knots_.back()));
      }
      const auto& costs = table(type);
      auto it = std::upper_bound(knots_.begin(), knots_.end(), effort);
      if (it == knots_.end()) return costs.back();
      std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
      std::size_t lo = hi - 1;
      double w = (effort - knots_[lo]) / (knots_[hi] - knots_[lo]);
      return costs[lo] + w * (costs[hi] - costs[lo]);
    }
  }
  return 0.0;
}

void MarketParams::validate() const {
  if (!std::isfinite(theta_h) || !(theta_h > 0.0)) {
    throw InputError("field 'theta_H': must be positive and finite");
  }
  if (!std::isfinite(theta_l) || !(theta_l < theta_h)) {
    throw InputError("field 'theta_L': must be finite and below theta_H");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw InputError("field 'lambda': must lie strictly inside (0, 1)");
  }
  if (n_schools < 1) {
    throw InputError("field 'n_schools': must be a positive integer");
  }
  if (credit_cap && (!(*credit_cap > 0.0) || !std::isfinite(*credit_cap))) {
    throw InputError("field 'credit_cap': must be positive and finite");
  }
  std::vector<double> grid = cost.kind() == CostKind::kTabulated
                                 ? cost.knots()
                                 : std::vector<double>{0.0, 1.0, 2.0};
  if (!check_decreasing_differences(cost, grid).passed()) {
    throw InputError(
        "field 'cost': violates strict decreasing differences "
        "(c(L,e) - c(H,e) must be nonnegative and strictly increasing)");
  }
}

double expected_type(const MarketParams& params) {
  return params.lambda * params.theta_h + (1.0 - params.lambda) * params.theta_l;
}

bool is_sorting(const MarketParams& params) { return params.theta_l >= 0.0; }

double max_welfare(const MarketParams& params) {
  return is_sorting(params) ? expected_type(params)
                            : params.lambda * params.theta_h;
}

double cost(const CostFamily& cf, Type type, double effort) {
  return cf(type, effort);
}

double bisect_increasing(const std::function<double(double)>& f, double target,
                         double tol, double initial_hi, double limit) {
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  double lo = 0.0;
  double hi = std::min(initial_hi, limit);
  double f_lo = f(lo);
  if (std::abs(f_lo - target) <= tol) return lo;
  if (f_lo > target) {
    throw NumericError("target lies below f(0)", lo, hi);
  }
  int steps = 0;
  while (f(hi) < target) {
    if (hi >= limit || ++steps > kMaxBisectionSteps) {
      throw NumericError("could not bracket the target", lo, hi);
    }
    lo = hi;
    hi = std::min(2.0 * hi, limit);
  }
  for (int i = 0; i < kMaxBisectionSteps; ++i) {
    double mid = lo + 0.5 * (hi - lo);
    double f_mid = f(mid);
    if (std::abs(f_mid - target) <= tol) return mid;
    if (mid <= lo || mid >= hi) {
      // Adjacent doubles: the root is as precise as the representation allows.
      return std::abs(f(lo) - target) <= std::abs(f(hi) - target) ? lo : hi;
    }
    if (f_mid < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NumericError("bisection did not converge", lo, hi);
}

double cost_inverse_effort(const CostFamily& cf, Type type, double target_cost,
                           double tol) {
  if (!(target_cost >= 0.0)) {
    throw DomainError("target cost must be nonnegative");
  }
  if (target_cost == 0.0) return 0.0;
  if (cf.kind() == CostKind::kLinear) return target_cost / cf.kappa(type);
  if (cf.kind() == CostKind::kPower) {
    return std::pow(target_cost / cf.kappa(type), 1.0 / cf.exponent());
  }
  double limit = cf.max_effort();
  if (std::isfinite(limit) && cf(type, limit) < target_cost - tol) {
    throw NumericError("target cost exceeds the tabulated range", 0.0, limit);
  }
  return bisect_increasing([&](double e) { return cf(type, e); }, target_cost,
                           tol, std::min(1.0, limit),
                           std::isfinite(limit) ? limit : 1e300);
}

DecreasingDifferencesReport check_decreasing_differences(
    const CostFamily& cf, const std::vector<double>& grid) {
  if (grid.size() < 2) {
    throw InputError("grid: need at least two points");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0)) throw InputError("grid: points must be nonnegative");
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw InputError("grid: points must be strictly ascending");
    }
  }
  DecreasingDifferencesReport report;
  std::vector<double> gap(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    gap[k] = cf(Type::kLow, grid[k]) - cf(Type::kHigh, grid[k]);
  }
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    if (gap[k] < 0.0 || gap[k + 1] < 0.0) {
      report.violations.push_back({k, k + 1, "negative gap"});
    } else if (!(gap[k + 1] > gap[k])) {
      report.violations.push_back({k, k + 1, "gap not strictly increasing"});
    }
  }
  return report;
}

double riley_effort(const MarketParams& params, double tol) {
  double target = params.theta_h - std::max(params.theta_l, 0.0);
  return cost_inverse_effort(params.cost, Type::kLow, target, tol);
}

}  // namespace signaling
