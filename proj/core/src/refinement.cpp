#include "signaling/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "signaling/errors.hpp"

namespace signaling {

namespace {

constexpr double kGridMatch = 1e-12;

bool grid_has(const std::vector<double>& grid, double e) {
  auto it = std::lower_bound(grid.begin(), grid.end(), e - kGridMatch);
  return it != grid.end() && std::abs(*it - e) <= kGridMatch;
}

void check_grid(const PolicyProfile& profile, const DeviationGrid& grid) {
  const auto& g = grid.efforts;
  if (g.empty() || g.front() != 0.0) {
    throw InputError("grid: must start at effort 0");
  }
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (!(g[k] > g[k - 1])) throw InputError("grid: must be strictly ascending");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    for (double t : profile[i].monitoring.thresholds()) {
      if (!grid_has(g, t)) {
        throw InputError("grid: missing threshold " + std::to_string(t) +
                         " of school " + std::to_string(i));
      }
    }
  }
}

void check_profile_match(const PolicyProfile& profile,
                         const SubgameEquilibrium& eq) {
  if (!(eq.profile == profile)) {
    throw InputError("equilibrium was built for a different profile");
  }
}

}  // namespace

DeviationGrid threshold_grid(const PolicyProfile& profile) {
  DeviationGrid grid;
  grid.efforts.push_back(0.0);
  for (const Policy& p : profile) {
    for (double t : p.monitoring.thresholds()) grid.efforts.push_back(t);
  }
  std::sort(grid.efforts.begin(), grid.efforts.end());
  grid.efforts.erase(std::unique(grid.efforts.begin(), grid.efforts.end()),
                     grid.efforts.end());
  return grid;
}

DeviationGrid make_deviation_grid(const PolicyProfile& profile, int points,
                                  double e_max) {
  if (points < 2) throw InputError("grid: need at least two points");
  if (!(e_max > 0.0)) throw InputError("grid: upper effort must be positive");
  DeviationGrid grid = threshold_grid(profile);
  for (int k = 0; k < points; ++k) {
    grid.efforts.push_back(e_max * k / (points - 1));
  }
  std::sort(grid.efforts.begin(), grid.efforts.end());
  std::vector<double> merged;
  for (double e : grid.efforts) {
    if (merged.empty() || e - merged.back() > kGridMatch) merged.push_back(e);
  }
  grid.efforts = std::move(merged);
  return grid;
}

const char* violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kStudentBestResponse:
      return "student_best_response";
    case ViolationKind::kWageBeliefConsistency:
      return "wage_belief_consistency";
    case ViolationKind::kBayesOnPath:
      return "bayes_on_path";
    case ViolationKind::kD1Belief:
      return "d1_belief";
    case ViolationKind::kMinimality:
      return "minimality";
  }
  return "unknown";
}

ViolationKind violation_kind_from_name(const std::string& name) {
  for (ViolationKind k :
       {ViolationKind::kStudentBestResponse,
        ViolationKind::kWageBeliefConsistency, ViolationKind::kBayesOnPath,
        ViolationKind::kD1Belief, ViolationKind::kMinimality}) {
    if (name == violation_kind_name(k)) return k;
  }
  throw InputError("field 'kind': unknown violation kind '" + name + "'");
}

void VerificationReport::merge(const VerificationReport& other) {
  violations.insert(violations.end(), other.violations.begin(),
                    other.violations.end());
}

VerificationReport verify_pbe(const PolicyProfile& profile,
                              const SubgameEquilibrium& eq,
                              const MarketParams& params,
                              const DeviationGrid& grid, double tol) {
  check_profile_match(profile, eq);
  check_grid(profile, grid);
  VerificationReport report;

  for (Type type : kTypes) {
    const auto& actions = eq.strategy.of(type);
    double total = 0.0;
    for (const Action& a : actions) total += a.prob;
    if (std::abs(total - 1.0) > tol) {
      report.violations.push_back({ViolationKind::kStudentBestResponse,
                                   std::nullopt, std::abs(total - 1.0)});
    }
    double best = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      for (double e : grid.efforts) {
        Action a{static_cast<int>(i), e, 1.0};
        best = std::max(best,
                        action_payoff(profile, params, eq.wages, type, a));
      }
    }
    for (const Action& a : actions) {
      if (a.prob <= 0.0) continue;
      double value = action_payoff(profile, params, eq.wages, type, a);
      if (value < best - tol) {
        std::optional<Signal> s;
        if (a.school) s = signal_of(profile, a);
        report.violations.push_back(
            {ViolationKind::kStudentBestResponse, s, best - value});
      }
    }
    double recomputed =
        strategy_payoff(profile, params, eq.wages, eq.strategy, type);
    if (std::abs(recomputed - eq.payoff(type)) > tol) {
      report.violations.push_back({ViolationKind::kStudentBestResponse,
                                   std::nullopt,
                                   std::abs(recomputed - eq.payoff(type))});
    }
  }

  for (const Signal& s : all_signals(profile)) {
    auto b = eq.beliefs.find(s);
    if (b == eq.beliefs.end()) {
      throw InputError("belief system has no entry for signal " + to_string(s));
    }
    double mu = b->second;
    const Offer& offer = offer_at(eq.wages, s);
    if (mu < -tol || mu > 1.0 + tol) {
      report.violations.push_back(
          {ViolationKind::kWageBeliefConsistency, s, mu < 0.0 ? -mu : mu - 1.0});
      continue;
    }
    double expected = params.theta_h * mu + params.theta_l * (1.0 - mu);
    double gap = 0.0;
    if (expected < -tol) {
      if (offer.hired) gap = offer.wage - expected;
    } else if (expected > tol) {
      gap = offer.hired ? std::abs(offer.wage - expected) : expected;
    } else if (offer.hired) {
      gap = std::abs(offer.wage);
    }
    if (gap > tol) {
      report.violations.push_back(
          {ViolationKind::kWageBeliefConsistency, s, gap});
    }
  }

  for (const auto& [s, mass] : signal_masses(profile, eq.strategy)) {
    double mu = bayes_belief(params, mass);
    double stored = eq.beliefs.at(s);
    if (std::abs(mu - stored) > tol) {
      report.violations.push_back(
          {ViolationKind::kBayesOnPath, s, std::abs(mu - stored)});
    }
  }
  return report;
}

D1WageSets d1_wage_sets(const PolicyProfile& profile, const MarketParams& params,
                        const Signal& s, Type type, double payoff) {
  validate_signal(profile, s);
  const double w_lo = std::max(0.0, params.theta_l);
  const double w_hi = params.theta_h;
  const double need = payoff + min_cost(profile, params.cost, type, s);
  D1WageSets sets;
  sets.weak.upper = w_hi;
  sets.strict.upper = w_hi;
  if (need <= w_hi) {
    sets.weak.empty = false;
    sets.weak.lower = std::max(need, w_lo);
    sets.weak.open = false;
  }
  if (need < w_hi) {
    sets.strict.empty = false;
    if (need < w_lo) {
      sets.strict.lower = w_lo;
      sets.strict.open = false;
    } else {
      sets.strict.lower = need;
      sets.strict.open = true;
    }
  }
  return sets;
}

D1WageSets d1_wage_sets(const PolicyProfile& profile,
                        const SubgameEquilibrium& eq,
                        const MarketParams& params, const Signal& s, Type type) {
  check_profile_match(profile, eq);
  if (signal_masses(profile, eq.strategy).count(s)) {
    throw InputError("signal " + to_string(s) + " is on path");
  }
  return d1_wage_sets(profile, params, s, type, eq.payoff(type));
}

bool strictly_contained(const WageInterval& weak, const WageInterval& strict,
                        double tol) {
  if (strict.empty) return false;
  if (weak.empty) return strict.lower < strict.upper - tol;
  // Both are upper intervals ending at the same wage, so proper inclusion
  // needs the weak lower bound strictly above the strict one.
  return weak.lower > strict.lower + tol;
}

std::optional<Type> d1_excluded_type(const PolicyProfile& profile,
                                     const MarketParams& params,
                                     const Signal& s, double payoff_l,
                                     double payoff_h, double tol) {
  D1WageSets low = d1_wage_sets(profile, params, s, Type::kLow, payoff_l);
  D1WageSets high = d1_wage_sets(profile, params, s, Type::kHigh, payoff_h);
  if (strictly_contained(high.weak, low.strict, tol)) return Type::kHigh;
  if (strictly_contained(low.weak, high.strict, tol)) return Type::kLow;
  return std::nullopt;
}

VerificationReport verify_extended_d1(const PolicyProfile& profile,
                                      const SubgameEquilibrium& eq,
                                      const MarketParams& params,
                                      const DeviationGrid& grid, double tol) {
  check_profile_match(profile, eq);
  check_grid(profile, grid);
  VerificationReport report;
  const auto masses = signal_masses(profile, eq.strategy);
  for (const Signal& s : all_signals(profile)) {
    if (masses.count(s)) continue;
    auto excluded =
        d1_excluded_type(profile, params, s, eq.payoff_l, eq.payoff_h, tol);
    if (!excluded) continue;
    double mu = eq.beliefs.at(s);
    double gap = *excluded == Type::kHigh ? mu : 1.0 - mu;
    if (gap > tol) {
      report.violations.push_back({ViolationKind::kD1Belief, s, gap});
    }
  }
  return report;
}

SubgameEquilibrium assemble_equilibrium(const PolicyProfile& profile,
                                        const MarketParams& params,
                                        const PopulationStrategy& strategy,
                                        ConstructionTag tag, double tol) {
  SubgameEquilibrium eq;
  eq.profile = profile;
  eq.tag = tag;
  eq.strategy.low = normalize_actions(strategy.low);
  eq.strategy.high = normalize_actions(strategy.high);
  const auto masses = signal_masses(profile, eq.strategy);
  for (const auto& [s, mass] : masses) {
    double mu = bayes_belief(params, mass);
    eq.beliefs[s] = mu;
    eq.wages[s] = offer_from_belief(params, mu);
  }
  // Payoffs depend only on on-path wages.
  eq.payoff_l =
      strategy_payoff(profile, params, eq.wages, eq.strategy, Type::kLow);
  eq.payoff_h =
      strategy_payoff(profile, params, eq.wages, eq.strategy, Type::kHigh);
  for (const Signal& s : all_signals(profile)) {
    if (masses.count(s)) continue;
    auto excluded =
        d1_excluded_type(profile, params, s, eq.payoff_l, eq.payoff_h, tol);
    double mu = excluded == Type::kLow ? 1.0 : 0.0;
    eq.beliefs[s] = mu;
    eq.wages[s] = offer_from_belief(params, mu);
  }
  return eq;
}

namespace {

constexpr std::size_t kMaxRemovableMessages = 16;

bool supports_equilibrium(const PolicyProfile& profile,
                          const SubgameEquilibrium& original,
                          const MarketParams& params, double tol) {
  SubgameEquilibrium candidate =
      assemble_equilibrium(profile, params, original.strategy, original.tag, tol);
  // On-path wages must be unchanged.
  for (const auto& [s, mass] : signal_masses(profile, candidate.strategy)) {
    (void)mass;
    const Offer& before = offer_at(original.wages, s);
    const Offer& after = offer_at(candidate.wages, s);
    if (before.hired != after.hired ||
        std::abs(before.wage - after.wage) > tol) {
      return false;
    }
  }
  DeviationGrid grid = threshold_grid(profile);
  return verify_pbe(profile, candidate, params, grid, tol).passed() &&
         verify_extended_d1(profile, candidate, params, grid, tol).passed();
}

}  // namespace

VerificationReport check_minimality(const PolicyProfile& profile,
                                    const SubgameEquilibrium& eq,
                                    const MarketParams& params, double tol) {
  check_profile_match(profile, eq);
  VerificationReport report;
  const auto masses = signal_masses(profile, eq.strategy);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto& policy = profile[i].monitoring;
    std::set<MessageId> sent;
    std::vector<MessageId> unsent;
    for (MessageId m : policy.messages()) {
      if (masses.count(Signal{static_cast<int>(i), m})) {
        sent.insert(m);
      } else {
        unsent.push_back(m);
      }
    }
    if (unsent.empty()) continue;
    if (unsent.size() > kMaxRemovableMessages) {
      throw ResourceError("minimality check: too many unsent messages at school " +
                          std::to_string(i));
    }
    // Try every proper subset of unsent messages to keep.
    const std::size_t subsets = std::size_t{1} << unsent.size();
    for (std::size_t mask = 0; mask + 1 < subsets; ++mask) {
      std::set<MessageId> keep = sent;
      for (std::size_t k = 0; k < unsent.size(); ++k) {
        if (mask & (std::size_t{1} << k)) keep.insert(unsent[k]);
      }
      if (keep.empty()) continue;
      PolicyProfile reduced = profile;
      reduced[i].monitoring = reduce_minimal(policy, keep);
      if (supports_equilibrium(reduced, eq, params, tol)) {
        MessageId dropped = 0;
        for (MessageId m : unsent) {
          if (!keep.count(m)) {
            dropped = m;
            break;
          }
        }
        report.violations.push_back({ViolationKind::kMinimality,
                                     Signal{static_cast<int>(i), dropped}, 0.0});
        break;
      }
    }
  }
  return report;
}

}  // namespace signaling
