#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace signaling {

enum class Type { kLow, kHigh };

inline constexpr Type kTypes[] = {Type::kLow, Type::kHigh};

const char* type_name(Type type);

enum class CostKind { kLinear, kPower, kTabulated };

const char* cost_kind_name(CostKind kind);

// Effort cost c(type, e). The type label selects the slope; productivity values
// never enter the cost.
class CostFamily {
 public:
  static CostFamily linear(double kappa_low, double kappa_high);
  static CostFamily power(double kappa_low, double kappa_high, double exponent);
  // Piecewise-linear interpolation over knots; knots[0] must be 0 and both cost
  // columns must start at 0 and increase strictly.
  static CostFamily tabulated(std::vector<double> knots,
                              std::vector<double> low_costs,
                              std::vector<double> high_costs);

  CostKind kind() const { return kind_; }
  double kappa(Type type) const;
  double exponent() const { return exponent_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& table(Type type) const;

  // Largest effort at which the cost is defined (infinite for parametric kinds).
  double max_effort() const;

  double operator()(Type type, double effort) const;

  bool operator==(const CostFamily& other) const = default;

 private:
  CostFamily() = default;

  CostKind kind_ = CostKind::kLinear;
  double kappa_low_ = 0.0;
  double kappa_high_ = 0.0;
  double exponent_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> low_costs_;
  std::vector<double> high_costs_;
};

struct MarketParams {
  double theta_l = 0.0;
  double theta_h = 1.0;
  double lambda = 0.5;
  CostFamily cost = CostFamily::linear(2.0, 1.0);
  int n_schools = 1;
  std::optional<double> credit_cap;

  // Throws InputError naming the offending field.
  void validate() const;

  bool operator==(const MarketParams& other) const = default;
};

inline constexpr double kDefaultTol = 1e-9;
inline constexpr int kMaxBisectionSteps = 200;

double expected_type(const MarketParams& params);

// Sorting: both types productive (the boundary theta_l = 0 counts as sorting).
bool is_sorting(const MarketParams& params);

// E[theta] under sorting, lambda * theta_h under screening.
double max_welfare(const MarketParams& params);

double cost(const CostFamily& cf, Type type, double effort);

// Bisection for an increasing function on [0, inf): returns x with
// |f(x) - target| <= tol. The upper end starts at `initial_hi` and doubles until
// it brackets the target, never exceeding `limit`.
double bisect_increasing(const std::function<double(double)>& f, double target,
                         double tol, double initial_hi = 1.0,
                         double limit = 1e300);

double cost_inverse_effort(const CostFamily& cf, Type type, double target_cost,
                           double tol = kDefaultTol);

struct DecreasingDifferencesViolation {
  std::size_t lo_index;
  std::size_t hi_index;
  std::string reason;
};

struct DecreasingDifferencesReport {
  std::vector<DecreasingDifferencesViolation> violations;
  bool passed() const { return violations.empty(); }
};

DecreasingDifferencesReport check_decreasing_differences(
    const CostFamily& cf, const std::vector<double>& grid);

// Effort solving c(L, e) = theta_h - max(theta_l, 0).
double riley_effort(const MarketParams& params, double tol = kDefaultTol);

}  // namespace signaling
