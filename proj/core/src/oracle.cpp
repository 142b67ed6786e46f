#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "signaling/errors.hpp"
#include "signaling/refinement.hpp"

namespace signaling {

namespace {

constexpr double kMassFloor = 1e-9;
constexpr double kPivot = 1e-14;

// Signals sharing fee and minimum effort: identical costs for both types, so
// students are indifferent among them and firms must pay them alike.
struct SignalClass {
  double fee = 0.0;
  double effort = 0.0;
  double cost_low = 0.0;
  double cost_high = 0.0;
  std::vector<Signal> signals;
};

struct Support {
  std::vector<int> classes;  // ascending class indices
  bool outside = false;
};

std::vector<SignalClass> build_classes(const PolicyProfile& profile,
                                       const MarketParams& params, double tol) {
  std::vector<SignalClass> classes;
  for (const Signal& s : all_signals(profile)) {
    const Policy& p = profile[static_cast<std::size_t>(s.school)];
    double e = min_effort(p.monitoring, s.message);
    auto it = std::find_if(classes.begin(), classes.end(),
                           [&](const SignalClass& c) {
                             return std::abs(c.fee - p.fee) <= tol &&
                                    std::abs(c.effort - e) <= tol;
                           });
    if (it == classes.end()) {
      SignalClass c;
      c.fee = p.fee;
      c.effort = e;
      c.cost_low = params.cost(Type::kLow, e) + p.fee;
      c.cost_high = params.cost(Type::kHigh, e) + p.fee;
      c.signals.push_back(s);
      classes.push_back(std::move(c));
    } else {
      it->signals.push_back(s);
    }
  }
  std::stable_sort(classes.begin(), classes.end(),
                   [](const SignalClass& a, const SignalClass& b) {
                     if (a.effort != b.effort) return a.effort < b.effort;
                     if (a.fee != b.fee) return a.fee < b.fee;
                     return a.signals.front() < b.signals.front();
                   });
  return classes;
}

std::vector<Support> enumerate_supports(int n_classes, int cap) {
  std::vector<std::vector<int>> combos{{}};
  for (int k = 1; k <= cap; ++k) {
    std::vector<int> pick(static_cast<std::size_t>(k));
    // Lexicographic k-combinations of [0, n_classes).
    for (int j = 0; j < k; ++j) pick[static_cast<std::size_t>(j)] = j;
    while (k <= n_classes) {
      combos.push_back(pick);
      int j = k - 1;
      while (j >= 0 &&
             pick[static_cast<std::size_t>(j)] == n_classes - k + j) {
        --j;
      }
      if (j < 0) break;
      ++pick[static_cast<std::size_t>(j)];
      for (int l = j + 1; l < k; ++l) {
        pick[static_cast<std::size_t>(l)] =
            pick[static_cast<std::size_t>(l - 1)] + 1;
      }
    }
  }
  std::sort(combos.begin(), combos.end());
  std::vector<Support> out;
  for (const auto& c : combos) {
    for (bool outside : {false, true}) {
      if (c.empty() && !outside) continue;
      out.push_back({c, outside});
    }
  }
  return out;
}

bool has(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// One weight variable: a signal of a class (or the outside option) for a type.
struct Var {
  Type type;
  int cls = -1;  // -1 for the outside option
  Signal signal;
  double row0 = 0.0;  // coefficient in the high-type mass constraint
  double row1 = 0.0;  // coefficient in the low-type mass constraint
};

// Centroid of the vertices of {x >= 0 : A x = (1, 1)}; empty if infeasible.
std::optional<std::vector<double>> centroid_solution(const std::vector<Var>& vars,
                                                     double tol) {
  const std::size_t n = vars.size();
  bool proportional = true;
  for (const Var& v : vars) {
    if (std::abs(v.row1 - v.row0) > tol) proportional = false;
  }
  std::vector<std::vector<double>> vertices;
  auto add_vertex = [&](std::vector<double> x) {
    for (double& xi : x) xi = std::max(xi, 0.0);
    for (const auto& v : vertices) {
      bool same = true;
      for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(v[k] - x[k]) > 1e-12) same = false;
      }
      if (same) return;
    }
    vertices.push_back(std::move(x));
  };
  if (proportional) {
    // Both constraints coincide: vertices are the unit masses.
    for (std::size_t j = 0; j < n; ++j) {
      if (vars[j].row0 > kPivot) {
        std::vector<double> x(n, 0.0);
        x[j] = 1.0 / vars[j].row0;
        add_vertex(std::move(x));
      }
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        double a = vars[j].row0, b = vars[k].row0;
        double c = vars[j].row1, d = vars[k].row1;
        double det = a * d - b * c;
        if (std::abs(det) < kPivot) continue;
        double xj = (d - b) / det;
        double xk = (a - c) / det;
        if (xj < -1e-12 || xk < -1e-12) continue;
        std::vector<double> x(n, 0.0);
        x[j] = xj;
        x[k] = xk;
        add_vertex(std::move(x));
      }
    }
  }
  if (vertices.empty()) return std::nullopt;
  std::vector<double> centroid(n, 0.0);
  for (const auto& v : vertices) {
    for (std::size_t k = 0; k < n; ++k) centroid[k] += v[k];
  }
  for (double& x : centroid) x /= static_cast<double>(vertices.size());
  return centroid;
}

class Enumerator {
 public:
  Enumerator(const PolicyProfile& profile, const MarketParams& params,
             const DeviationGrid& grid, double tol)
      : profile_(profile),
        params_(params),
        grid_(grid),
        tol_(tol),
        classes_(build_classes(profile, params, tol)) {}

  int n_classes() const { return static_cast<int>(classes_.size()); }

  std::optional<SubgameEquilibrium> solve(const Support& high,
                                          const Support& low) const;

 private:
  // Payoff of a class sent by one type only.
  double exclusive_value(Type type, int c) const {
    const SignalClass& k = classes_[static_cast<std::size_t>(c)];
    double wage = type == Type::kHigh
                      ? params_.theta_h
                      : offer_from_belief(params_, 0.0).value();
    return wage - (type == Type::kLow ? k.cost_low : k.cost_high);
  }

  std::optional<double> pinned_payoff(Type type, const Support& own,
                                      const std::vector<int>& shared) const;

  const PolicyProfile& profile_;
  const MarketParams& params_;
  const DeviationGrid& grid_;
  double tol_;
  std::vector<SignalClass> classes_;
};

std::optional<double> Enumerator::pinned_payoff(
    Type type, const Support& own, const std::vector<int>& shared) const {
  std::vector<double> values;
  if (own.outside) values.push_back(0.0);
  for (int c : own.classes) {
    if (!has(shared, c)) values.push_back(exclusive_value(type, c));
  }
  if (values.empty()) return std::nullopt;
  for (double v : values) {
    if (std::abs(v - values.front()) > tol_) return std::nullopt;
  }
  return values.front();
}

std::optional<SubgameEquilibrium> Enumerator::solve(const Support& high,
                                                    const Support& low) const {
  const double th = params_.theta_h;
  const double tl = params_.theta_l;
  const double lam = params_.lambda;
  std::vector<int> shared;
  for (int c : high.classes) {
    if (has(low.classes, c)) shared.push_back(c);
  }
  auto cls = [&](int c) -> const SignalClass& {
    return classes_[static_cast<std::size_t>(c)];
  };

  // Exclusive actions and the outside option pin payoffs directly; they must
  // agree within each type.
  auto payoff_known = [&](const Support& own) {
    return own.outside || std::any_of(own.classes.begin(), own.classes.end(),
                                      [&](int c) { return !has(shared, c); });
  };
  bool high_known = payoff_known(high);
  bool low_known = payoff_known(low);
  std::optional<double> u_high, u_low;
  if (high_known) {
    u_high = pinned_payoff(Type::kHigh, high, shared);
    if (!u_high) return std::nullopt;
  }
  if (low_known) {
    u_low = pinned_payoff(Type::kLow, low, shared);
    if (!u_low) return std::nullopt;
  }

  // Wages on pooled classes follow from indifference.
  std::vector<double> wage(shared.size());
  if (u_low || u_high) {
    for (std::size_t k = 0; k < shared.size(); ++k) {
      const SignalClass& c = cls(shared[k]);
      double from_low = u_low ? *u_low + c.cost_low : 0.0;
      double from_high = u_high ? *u_high + c.cost_high : 0.0;
      if (u_low && u_high && std::abs(from_low - from_high) > tol_) {
        return std::nullopt;
      }
      wage[k] = u_low ? from_low : from_high;
      if (!u_low) {
        double implied = wage[k] - c.cost_low;
        if (k > 0 && std::abs(implied - wage[0] + cls(shared[0]).cost_low) >
                         tol_) {
          return std::nullopt;
        }
      }
      if (!u_high) {
        double implied = wage[k] - c.cost_high;
        if (k > 0 && std::abs(implied - wage[0] + cls(shared[0]).cost_high) >
                         tol_) {
          return std::nullopt;
        }
      }
    }
  } else if (shared.size() == 1) {
    // Everyone pools on one class.
    wage[0] = expected_type(params_);
  } else {
    // Two pooled classes with equal effort and different fees: a continuum
    // indexed by the low payoff; take the midpoint of the admissible range.
    const SignalClass& a = cls(shared[0]);
    const SignalClass& b = cls(shared[1]);
    if (std::abs((a.cost_low - a.cost_high) - (b.cost_low - b.cost_high)) >
        tol_) {
      return std::nullopt;
    }
    const SignalClass& cheap = a.cost_low <= b.cost_low ? a : b;
    const SignalClass& dear = a.cost_low <= b.cost_low ? b : a;
    double mean = expected_type(params_);
    double lo = std::max({mean - dear.cost_low, tl - cheap.cost_low,
                          -cheap.cost_low});
    double hi = std::min(mean - cheap.cost_low, th - dear.cost_low);
    if (hi - lo <= 2.0 * tol_) return std::nullopt;
    double u = 0.5 * (lo + hi);
    for (std::size_t k = 0; k < shared.size(); ++k) {
      wage[k] = u + cls(shared[k]).cost_low;
    }
  }
  // Pooled wages must be strictly between the type productivities and payable.
  std::vector<double> ratio(shared.size());
  for (std::size_t k = 0; k < shared.size(); ++k) {
    if (!(wage[k] > tl + tol_ && wage[k] < th - tol_ && wage[k] >= 0.0)) {
      return std::nullopt;
    }
    ratio[k] = lam * (th - wage[k]) / ((1.0 - lam) * (wage[k] - tl));
  }

  std::vector<Var> vars;
  for (int c : high.classes) {
    auto pos = std::find(shared.begin(), shared.end(), c);
    double r = pos == shared.end()
                   ? 0.0
                   : ratio[static_cast<std::size_t>(pos - shared.begin())];
    for (const Signal& s : cls(c).signals) {
      vars.push_back({Type::kHigh, c, s, 1.0, r});
    }
  }
  if (high.outside) vars.push_back({Type::kHigh, -1, {}, 1.0, 0.0});
  for (int c : low.classes) {
    if (has(shared, c)) continue;
    for (const Signal& s : cls(c).signals) {
      vars.push_back({Type::kLow, c, s, 0.0, 1.0});
    }
  }
  if (low.outside) vars.push_back({Type::kLow, -1, {}, 0.0, 1.0});

  auto x = centroid_solution(vars, tol_);
  if (!x) return std::nullopt;

  PopulationStrategy strategy;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const Var& v = vars[k];
    double mass = (*x)[k];
    if (v.cls < 0) {
      strategy.of(v.type).push_back({std::nullopt, 0.0, mass});
      continue;
    }
    double e = cls(v.cls).effort;
    strategy.of(v.type).push_back({v.signal.school, e, mass});
    if (v.type == Type::kHigh && v.row1 > 0.0) {
      strategy.low.push_back({v.signal.school, e, v.row1 * mass});
    }
  }
  // Every element of both supports must carry positive mass.
  auto class_mass = [&](Type type, int c) {
    double m = 0.0;
    for (const Action& a : strategy.of(type)) {
      if (c < 0 ? !a.school.has_value()
                : (a.school && std::abs(a.effort - cls(c).effort) <= tol_ &&
                   std::abs(profile_[static_cast<std::size_t>(*a.school)].fee -
                            cls(c).fee) <= tol_)) {
        m += a.prob;
      }
    }
    return m;
  };
  for (Type type : kTypes) {
    const Support& own = type == Type::kHigh ? high : low;
    for (int c : own.classes) {
      if (class_mass(type, c) <= kMassFloor) return std::nullopt;
    }
    if (own.outside && class_mass(type, -1) <= kMassFloor) return std::nullopt;
    double total = 0.0;
    for (const Action& a : strategy.of(type)) total += a.prob;
    if (std::abs(total - 1.0) > 1e-9) return std::nullopt;
  }

  SubgameEquilibrium eq = assemble_equilibrium(
      profile_, params_, strategy,
      shared.empty() ? ConstructionTag::kSeparating
                     : ConstructionTag::kSemiPooling,
      tol_);
  if (!verify_pbe(profile_, eq, params_, grid_, tol_).passed()) {
    return std::nullopt;
  }
  if (!verify_extended_d1(profile_, eq, params_, grid_, tol_).passed()) {
    return std::nullopt;
  }
  return eq;
}

}  // namespace

std::vector<SubgameEquilibrium> brute_force_equilibria(
    const PolicyProfile& profile, const MarketParams& params,
    const DeviationGrid& grid, int support_cap, double tol) {
  if (grid.efforts.size() > kMaxOracleGridPoints) {
    throw ResourceError("oracle grid has " +
                        std::to_string(grid.efforts.size()) +
                        " points; the cap is " +
                        std::to_string(kMaxOracleGridPoints));
  }
  if (support_cap < 1 || support_cap > kMaxOracleSupport) {
    throw InputError("support_cap must be 1 or 2");
  }
  validate_profile(profile, params);
  for (const Policy& p : profile) {
    if (p.fee > params.theta_h) return {};
  }
  Enumerator en(profile, params, grid, tol);
  const auto supports = enumerate_supports(en.n_classes(), support_cap);
  std::vector<SubgameEquilibrium> out;
  for (const Support& high : supports) {
    for (const Support& low : supports) {
      if (auto eq = en.solve(high, low)) out.push_back(std::move(*eq));
    }
  }
  return out;
}

namespace {

double snap(const std::vector<double>& grid, double e) {
  double best = e;
  double dist = std::numeric_limits<double>::infinity();
  for (double g : grid) {
    if (std::abs(g - e) < dist) {
      dist = std::abs(g - e);
      best = g;
    }
  }
  return best;
}

std::vector<Action> snapped(const std::vector<Action>& actions,
                            const std::vector<double>& grid) {
  std::vector<Action> out = actions;
  for (Action& a : out) {
    if (a.school) a.effort = snap(grid, a.effort);
  }
  return normalize_actions(std::move(out), 1e-12);
}

}  // namespace

bool outcome_equivalent(const SubgameEquilibrium& a,
                        const SubgameEquilibrium& b, const DeviationGrid& grid,
                        double tol) {
  if (!(a.profile == b.profile)) return false;
  for (Type type : kTypes) {
    auto sa = snapped(a.strategy.of(type), grid.efforts);
    auto sb = snapped(b.strategy.of(type), grid.efforts);
    std::erase_if(sa, [&](const Action& x) { return x.prob <= tol; });
    std::erase_if(sb, [&](const Action& x) { return x.prob <= tol; });
    if (sa.size() != sb.size()) return false;
    for (std::size_t k = 0; k < sa.size(); ++k) {
      if (sa[k].school != sb[k].school || sa[k].effort != sb[k].effort ||
          std::abs(sa[k].prob - sb[k].prob) > tol) {
        return false;
      }
    }
  }
  auto on_path = signal_masses(a.profile, a.strategy);
  for (const auto& [s, m] : signal_masses(b.profile, b.strategy)) on_path[s] = m;
  for (const auto& [s, m] : on_path) {
    (void)m;
    const Offer& x = offer_at(a.wages, s);
    const Offer& y = offer_at(b.wages, s);
    if (x.hired != y.hired || std::abs(x.wage - y.wage) > tol) return false;
  }
  return true;
}

}  // namespace signaling
