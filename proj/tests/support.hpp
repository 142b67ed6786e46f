#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "signaling/epbe.hpp"
#include "signaling/outer_game.hpp"
#include "signaling/refinement.hpp"

namespace signaling::testing {

inline MarketParams market(double theta_h, double theta_l, double lambda,
                           double kappa_l = 2.0, double kappa_h = 1.0, int n = 1) {
  MarketParams p;
  p.theta_h = theta_h;
  p.theta_l = theta_l;
  p.lambda = lambda;
  p.cost = CostFamily::linear(kappa_l, kappa_h);
  p.n_schools = n;
  return p;
}

inline MarketParams screening(int n = 1) { return market(2.0, -1.0, 0.5, 2.0, 1.0, n); }
inline MarketParams sorting(int n = 1) { return market(2.0, 1.0, 0.5, 2.0, 1.0, n); }

inline StepMonitoringPolicy ladder_policy(const std::vector<double>& thresholds) {
  std::vector<MessageId> messages;
  for (std::size_t k = 0; k <= thresholds.size(); ++k) {
    messages.push_back(static_cast<MessageId>(k));
  }
  return {thresholds, messages};
}

struct CorpusEntry {
  std::string name;
  MarketParams params;
  PolicyProfile profile;
};

inline void PrintTo(const CorpusEntry& c, std::ostream* os) { *os << c.name; }

// Hand-picked profiles plus seeded random ones on a 0.1 effort lattice.
inline std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  auto add = [&](std::string name, MarketParams p, PolicyProfile profile) {
    p.n_schools = static_cast<int>(profile.size());
    out.push_back({std::move(name), p, std::move(profile)});
  };
  add("monopoly_pooling_sorting", sorting(), {{1.5, StepMonitoringPolicy{}}});
  add("monopoly_screening", screening(), {{2.0, StepMonitoringPolicy{}}});
  add("cutoff_half_sorting", sorting(), {{0.0, StepMonitoringPolicy::cutoff(0.5)}});
  add("cutoff_0.6_sorting", sorting(), {{0.0, StepMonitoringPolicy::cutoff(0.6)}});
  add("riley_screening_n2", screening(),
      {{0.0, StepMonitoringPolicy::cutoff(1.0)}, {0.0, StepMonitoringPolicy::cutoff(1.0)}});
  add("riley_sorting_n2", sorting(),
      {{0.0, StepMonitoringPolicy::cutoff(0.5)}, {0.0, StepMonitoringPolicy::cutoff(0.5)}});
  add("mixed_thresholds_n2", sorting(),
      {{0.0, StepMonitoringPolicy::cutoff(0.4)}, {0.0, StepMonitoringPolicy::cutoff(0.6)}});
  add("three_messages", screening(), {{0.3, ladder_policy({0.4, 1.2})}});
  add("uninformative_n2_sorting", sorting(),
      {{1.5, StepMonitoringPolicy{}}, {1.5, StepMonitoringPolicy{}}});
  add("semipooling_kappa", market(2.0, -1.0, 0.5, 2.0, 1.8),
      {{0.0, StepMonitoringPolicy::cutoff(1.0)}, {0.0, StepMonitoringPolicy::cutoff(1.0)}});

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> step(1, 19), msgs(1, 3), fee(0, 8), n(1, 2),
      base(0, 3);
  const MarketParams bases[] = {screening(), sorting(), market(2.0, 0.0, 0.4),
                                market(2.0, -0.5, 0.6, 3.0, 1.5)};
  for (int k = 0; k < 24; ++k) {
    PolicyProfile profile;
    int schools = n(rng);
    for (int i = 0; i < schools; ++i) {
      std::vector<int> picks;
      int m = msgs(rng);
      while (static_cast<int>(picks.size()) < m - 1) {
        int s = step(rng);
        if (std::find(picks.begin(), picks.end(), s) == picks.end()) picks.push_back(s);
      }
      std::sort(picks.begin(), picks.end());
      std::vector<double> thresholds;
      for (int s : picks) thresholds.push_back(0.1 * s);
      profile.push_back({0.25 * fee(rng), ladder_policy(thresholds)});
    }
    add("random_" + std::to_string(k), bases[base(rng)], profile);
  }
  return out;
}

inline DeviationGrid lattice_grid(const PolicyProfile& profile) {
  return make_deviation_grid(profile, 21, 2.0);
}

inline double type_weight(const MarketParams& p, Type t) {
  return t == Type::kHigh ? p.lambda : 1.0 - p.lambda;
}

}  // namespace signaling::testing
