#pragma once

#include <optional>
#include <vector>

#include "signaling/equilibrium.hpp"

namespace signaling {

struct Reservation {
  double f_min = 0.0;
  // Payoff of the fallback play: enroll at a cheapest school with zero effort,
  // or stay out, whichever pays more.
  double u_low = 0.0;
};

Reservation reservation(const PolicyProfile& profile, const MarketParams& params);

// Where low types stop being willing to mimic high types, and the induced
// partition of signals.
struct FrontierReport {
  Reservation res;
  // Largest effort a low type would exert at school i for wage theta_h;
  // empty when the school is unattractive even at zero effort.
  std::vector<std::optional<double>> mimic_effort;
  // Highest message of school i reachable within mimic_effort[i].
  std::vector<std::optional<MessageId>> marginal_message;
  // Minimum effort of the overall marginal message.
  double marginal_effort = 0.0;
  // Cheapest schools among those whose marginal message reaches
  // marginal_effort.
  std::vector<int> marginal_schools;
  std::vector<Signal> marginal;  // marginal signals
  std::vector<Signal> above;     // min effort strictly above marginal_effort
  std::vector<Signal> below;     // everything else
  double cost_low_marginal = 0.0;
  double cost_high_marginal = 0.0;
};

FrontierReport mimic_frontier(const PolicyProfile& profile,
                              const MarketParams& params,
                              double tol = kDefaultTol);

// Canonical equilibrium of the student/firm subgame after `profile`.
SubgameEquilibrium construct_epbe(const PolicyProfile& profile,
                                  const MarketParams& params,
                                  double tol = kDefaultTol);

}  // namespace signaling
