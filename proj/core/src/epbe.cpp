#include "signaling/epbe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "signaling/errors.hpp"

namespace signaling {

namespace {

const Policy& policy_of(const PolicyProfile& profile, int school) {
  return profile[static_cast<std::size_t>(school)];
}

double signal_effort(const PolicyProfile& profile, const Signal& s) {
  return min_effort(policy_of(profile, s.school).monitoring, s.message);
}

bool contains(const std::vector<Signal>& set, const Signal& s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

// Low types' fallback: zero effort spread over the cheapest schools when that
// pays at least the outside option.
std::vector<Action> fallback_actions(const PolicyProfile& profile,
                                     const MarketParams& params,
                                     const Reservation& res, double mass,
                                     double tol) {
  if (params.theta_l - res.f_min < -tol) {
    return {Action{std::nullopt, 0.0, mass}};
  }
  std::vector<int> cheapest;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].fee <= res.f_min + tol) cheapest.push_back(static_cast<int>(i));
  }
  std::vector<Action> out;
  for (int i : cheapest) {
    out.push_back({i, 0.0, mass / static_cast<double>(cheapest.size())});
  }
  return out;
}

}  // namespace

Reservation reservation(const PolicyProfile& profile,
                        const MarketParams& params) {
  if (profile.empty()) throw InputError("profile: no policies");
  Reservation r;
  r.f_min = std::numeric_limits<double>::infinity();
  for (const Policy& p : profile) r.f_min = std::min(r.f_min, p.fee);
  r.u_low = std::max(0.0, params.theta_l - r.f_min);
  return r;
}

FrontierReport mimic_frontier(const PolicyProfile& profile,
                              const MarketParams& params, double tol) {
  validate_profile(profile, params);
  FrontierReport fr;
  fr.res = reservation(profile, params);
  const double budget = params.theta_h - fr.res.u_low;
  const CostFamily& cf = params.cost;

  for (std::size_t i = 0; i < profile.size(); ++i) {
    const Policy& p = profile[i];
    double target = budget - p.fee;
    if (target < -tol) {
      fr.mimic_effort.push_back(std::nullopt);
      fr.marginal_message.push_back(std::nullopt);
      continue;
    }
    target = std::max(target, 0.0);
    if (std::isfinite(cf.max_effort()) &&
        cf(Type::kLow, cf.max_effort()) < target) {
      fr.mimic_effort.push_back(std::numeric_limits<double>::infinity());
    } else {
      fr.mimic_effort.push_back(
          cost_inverse_effort(cf, Type::kLow, target, tol));
    }
    // Highest message whose minimum low-type cost fits in the budget; costs
    // increase with the band index.
    std::optional<MessageId> best;
    const auto& msgs = p.monitoring.messages();
    for (std::size_t j = 0; j < msgs.size(); ++j) {
      double e = min_effort(p.monitoring, msgs[j]);
      if (cf(Type::kLow, e) + p.fee <= budget + tol) best = msgs[j];
    }
    fr.marginal_message.push_back(best);
  }

  // Overall marginal message: highest minimum effort, then lowest fee.
  double top = -1.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!fr.marginal_message[i]) continue;
    top = std::max(top, min_effort(profile[i].monitoring,
                                   *fr.marginal_message[i]));
  }
  if (top < 0.0) {
    throw InvariantError("no school admits a marginal signal");
  }
  std::vector<int> reach;
  double cheapest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!fr.marginal_message[i]) continue;
    double e = min_effort(profile[i].monitoring, *fr.marginal_message[i]);
    if (e >= top - tol) {
      reach.push_back(static_cast<int>(i));
      cheapest = std::min(cheapest, profile[i].fee);
    }
  }
  for (int i : reach) {
    if (policy_of(profile, i).fee <= cheapest + tol) {
      fr.marginal_schools.push_back(i);
      fr.marginal.push_back(
          {i, *fr.marginal_message[static_cast<std::size_t>(i)]});
    }
  }
  fr.marginal_effort = signal_effort(profile, fr.marginal.front());
  fr.cost_low_marginal = min_cost(profile, cf, Type::kLow, fr.marginal.front());
  fr.cost_high_marginal =
      min_cost(profile, cf, Type::kHigh, fr.marginal.front());

  for (const Signal& s : all_signals(profile)) {
    if (contains(fr.marginal, s)) continue;
    if (signal_effort(profile, s) > fr.marginal_effort + tol) {
      fr.above.push_back(s);
    } else {
      fr.below.push_back(s);
    }
  }
  return fr;
}

SubgameEquilibrium construct_epbe(const PolicyProfile& profile,
                                  const MarketParams& params, double tol) {
  validate_profile(profile, params);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].fee > params.theta_h + tol) {
      throw InputError("profile[" + std::to_string(i) +
                       "].fee: exceeds theta_H");
    }
  }
  const FrontierReport fr = mimic_frontier(profile, params, tol);
  const double u_low = fr.res.u_low;
  const CostFamily& cf = params.cost;

  bool pooling_branch = true;
  for (const Signal& s : fr.above) {
    double rhs = min_cost(profile, cf, Type::kHigh, s) - fr.cost_high_marginal +
                 fr.cost_low_marginal;
    if (params.theta_h - u_low > rhs + tol) {
      pooling_branch = false;
      break;
    }
  }

  SubgameEquilibrium eq;
  eq.profile = profile;
  std::vector<Signal> high_set;  // signals with belief 1
  std::vector<Signal> marginal_set;
  double marginal_belief = 0.0;
  Offer marginal_offer = Offer::none();

  if (pooling_branch) {
    eq.tag = ConstructionTag::kSemiPooling;
    const double n_marginal = static_cast<double>(fr.marginal.size());
    const double expected = expected_type(params);
    double w_bar = std::min(fr.cost_low_marginal + u_low, params.theta_h);
    if (w_bar >= params.theta_h - tol) w_bar = params.theta_h;
    double q = 1.0;
    if (w_bar >= params.theta_h - tol) {
      q = 0.0;
    } else if (w_bar > expected + tol) {
      q = params.lambda / (1.0 - params.lambda) * (params.theta_h - w_bar) /
          (w_bar - params.theta_l);
      q = std::clamp(q, 0.0, 1.0);
    }
    for (const Signal& s : fr.marginal) {
      double e = signal_effort(profile, s);
      eq.strategy.high.push_back({s.school, e, 1.0 / n_marginal});
      eq.strategy.low.push_back({s.school, e, q / n_marginal});
    }
    for (const Action& a :
         fallback_actions(profile, params, fr.res, 1.0 - q, tol)) {
      eq.strategy.low.push_back(a);
    }
    marginal_set = fr.marginal;
    marginal_belief = params.lambda /
                      (params.lambda + (1.0 - params.lambda) * q);
    marginal_offer = Offer::hire(std::max(w_bar, expected));
    high_set = fr.above;
  } else {
    eq.tag = ConstructionTag::kSeparating;
    double cheapest = std::numeric_limits<double>::infinity();
    for (const Signal& s : fr.above) {
      cheapest = std::min(cheapest, min_cost(profile, cf, Type::kHigh, s));
    }
    std::vector<Signal> cheapest_set;
    for (const Signal& s : fr.above) {
      if (min_cost(profile, cf, Type::kHigh, s) <= cheapest + tol) {
        cheapest_set.push_back(s);
      }
    }
    for (const Signal& s : cheapest_set) {
      eq.strategy.high.push_back(
          {s.school, signal_effort(profile, s),
           1.0 / static_cast<double>(cheapest_set.size())});
    }
    eq.strategy.low = fallback_actions(profile, params, fr.res, 1.0, tol);
    high_set = fr.above;
  }

  eq.strategy.low = normalize_actions(std::move(eq.strategy.low));
  eq.strategy.high = normalize_actions(std::move(eq.strategy.high));

  for (const Signal& s : all_signals(profile)) {
    if (contains(marginal_set, s)) {
      eq.beliefs[s] = marginal_belief;
      eq.wages[s] = marginal_offer;
    } else if (contains(high_set, s)) {
      eq.beliefs[s] = 1.0;
      eq.wages[s] = Offer::hire(params.theta_h);
    } else {
      eq.beliefs[s] = 0.0;
      eq.wages[s] = offer_from_belief(params, 0.0);
    }
  }
  eq.payoff_l = strategy_payoff(profile, params, eq.wages, eq.strategy,
                                Type::kLow);
  eq.payoff_h = strategy_payoff(profile, params, eq.wages, eq.strategy,
                                Type::kHigh);
  return eq;
}

}  // namespace signaling
