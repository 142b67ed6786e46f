#include "signaling/equilibrium.hpp"

#include <algorithm>
#include <tuple>

#include "signaling/errors.hpp"

namespace signaling {

const char* construction_tag_name(ConstructionTag tag) {
  return tag == ConstructionTag::kSemiPooling ? "semi_pooling" : "separating";
}

Offer offer_from_belief(const MarketParams& params, double mu_high) {
  double w = params.theta_h * mu_high + params.theta_l * (1.0 - mu_high);
  if (w < 0.0) return Offer::none();
  return Offer::hire(w);
}

Signal signal_of(const PolicyProfile& profile, const Action& a) {
  if (!a.school) throw InputError("outside option has no signal");
  int i = *a.school;
  if (i < 0 || static_cast<std::size_t>(i) >= profile.size()) {
    throw InputError("action school " + std::to_string(i) + " out of range");
  }
  return {i, message_of(profile[static_cast<std::size_t>(i)].monitoring,
                        a.effort)};
}

const Offer& offer_at(const WageSchedule& wages, const Signal& s) {
  auto it = wages.find(s);
  if (it == wages.end()) {
    throw InputError("wage schedule has no entry for signal " + to_string(s));
  }
  return it->second;
}

double action_payoff(const PolicyProfile& profile, const MarketParams& params,
                     const WageSchedule& wages, Type type, const Action& a) {
  if (!a.school) return 0.0;
  Signal s = signal_of(profile, a);
  return offer_at(wages, s).value() -
         profile[static_cast<std::size_t>(s.school)].fee -
         params.cost(type, a.effort);
}

double strategy_payoff(const PolicyProfile& profile, const MarketParams& params,
                       const WageSchedule& wages, const PopulationStrategy& st,
                       Type type) {
  double total = 0.0;
  for (const Action& a : st.of(type)) {
    total += a.prob * action_payoff(profile, params, wages, type, a);
  }
  return total;
}

std::map<Signal, SignalMass> signal_masses(const PolicyProfile& profile,
                                           const PopulationStrategy& st) {
  std::map<Signal, SignalMass> out;
  for (Type type : kTypes) {
    for (const Action& a : st.of(type)) {
      if (!a.school || a.prob <= 0.0) continue;
      SignalMass& m = out[signal_of(profile, a)];
      (type == Type::kLow ? m.low : m.high) += a.prob;
    }
  }
  return out;
}

double bayes_belief(const MarketParams& params, const SignalMass& mass) {
  double h = params.lambda * mass.high;
  double l = (1.0 - params.lambda) * mass.low;
  if (h + l <= 0.0) throw InvariantError("belief requested for an unsent signal");
  return h / (h + l);
}

std::vector<Action> normalize_actions(std::vector<Action> actions,
                                      double drop_below) {
  auto key = [](const Action& a) {
    return std::make_tuple(a.school.has_value(), a.school.value_or(-1),
                           a.effort);
  };
  std::sort(actions.begin(), actions.end(),
            [&](const Action& a, const Action& b) { return key(a) < key(b); });
  std::vector<Action> out;
  for (const Action& a : actions) {
    if (!out.empty() && key(out.back()) == key(a)) {
      out.back().prob += a.prob;
    } else {
      out.push_back(a);
    }
  }
  std::erase_if(out, [&](const Action& a) { return a.prob <= drop_below; });
  return out;
}

}  // namespace signaling
