#pragma once

#include <map>
#include <optional>
#include <vector>

#include "signaling/market.hpp"
#include "signaling/monitoring.hpp"

namespace signaling {

// Firm response to a signal: hire at a wage, or no offer (worth 0).
struct Offer {
  bool hired = false;
  double wage = 0.0;

  static Offer hire(double w) { return {true, w}; }
  static Offer none() { return {false, 0.0}; }
  double value() const { return hired ? wage : 0.0; }

  bool operator==(const Offer& other) const = default;
};

// Wage implied by a belief: theta_h * mu + theta_l * (1 - mu) when nonnegative.
Offer offer_from_belief(const MarketParams& params, double mu_high);

// Enrollment at a school with an effort, or the outside option (school empty,
// effort 0).
struct Action {
  std::optional<int> school;
  double effort = 0.0;
  double prob = 0.0;

  bool operator==(const Action& other) const = default;
};

struct PopulationStrategy {
  std::vector<Action> low;
  std::vector<Action> high;

  const std::vector<Action>& of(Type type) const {
    return type == Type::kLow ? low : high;
  }
  std::vector<Action>& of(Type type) {
    return type == Type::kLow ? low : high;
  }

  bool operator==(const PopulationStrategy& other) const = default;
};

using WageSchedule = std::map<Signal, Offer>;
using BeliefSystem = std::map<Signal, double>;

enum class ConstructionTag { kSemiPooling, kSeparating };

const char* construction_tag_name(ConstructionTag tag);

struct SubgameEquilibrium {
  PolicyProfile profile;
  PopulationStrategy strategy;
  WageSchedule wages;
  BeliefSystem beliefs;
  double payoff_l = 0.0;
  double payoff_h = 0.0;
  ConstructionTag tag = ConstructionTag::kSemiPooling;

  double payoff(Type type) const {
    return type == Type::kLow ? payoff_l : payoff_h;
  }

  bool operator==(const SubgameEquilibrium& other) const = default;
};

// Signal generated by an enrollment action.
Signal signal_of(const PolicyProfile& profile, const Action& a);

const Offer& offer_at(const WageSchedule& wages, const Signal& s);

// Student payoff of an action: offer value minus fee minus effort cost.
double action_payoff(const PolicyProfile& profile, const MarketParams& params,
                     const WageSchedule& wages, Type type, const Action& a);

// Strategy-weighted payoff of a type.
double strategy_payoff(const PolicyProfile& profile, const MarketParams& params,
                       const WageSchedule& wages, const PopulationStrategy& st,
                       Type type);

// Probability mass each type sends on each signal (type-conditional, not
// weighted by lambda).
struct SignalMass {
  double low = 0.0;
  double high = 0.0;
};
std::map<Signal, SignalMass> signal_masses(const PolicyProfile& profile,
                                           const PopulationStrategy& st);

// Posterior probability of the high type given type-conditional masses.
double bayes_belief(const MarketParams& params, const SignalMass& mass);

// Merges duplicate actions and drops zero-probability ones; sorts outside first,
// then by school and effort.
std::vector<Action> normalize_actions(std::vector<Action> actions,
                                      double drop_below = 0.0);

}  // namespace signaling
