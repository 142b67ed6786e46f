#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signaling/equilibrium.hpp"

namespace signaling {

struct DeviationGrid {
  std::vector<double> efforts;  // ascending, includes 0 and every threshold
  double wage_resolution = 1e-3;  // reporting only
};

// 0 plus every threshold of every policy.
DeviationGrid threshold_grid(const PolicyProfile& profile);

// `points` evenly spaced efforts on [0, e_max] merged with every threshold.
DeviationGrid make_deviation_grid(const PolicyProfile& profile, int points,
                                  double e_max);

enum class ViolationKind {
  kStudentBestResponse,
  kWageBeliefConsistency,
  kBayesOnPath,
  kD1Belief,
  kMinimality,
};

const char* violation_kind_name(ViolationKind kind);
ViolationKind violation_kind_from_name(const std::string& name);

struct Violation {
  ViolationKind kind;
  std::optional<Signal> signal;
  double gap = 0.0;

  bool operator==(const Violation& other) const = default;
};

struct VerificationReport {
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
  void merge(const VerificationReport& other);

  bool operator==(const VerificationReport& other) const = default;
};

VerificationReport verify_pbe(const PolicyProfile& profile,
                              const SubgameEquilibrium& eq,
                              const MarketParams& params,
                              const DeviationGrid& grid,
                              double tol = kDefaultTol);

// Upper wage interval within [max(0, theta_l), theta_h].
struct WageInterval {
  bool empty = true;
  double lower = 0.0;
  bool open = false;  // lower bound excluded
  double upper = 0.0;

  bool operator==(const WageInterval& other) const = default;
};

struct D1WageSets {
  WageInterval weak;    // wages weakly rationalizing the deviation
  WageInterval strict;  // wages strictly rationalizing it
};

// Sets for a type with equilibrium payoff `payoff` deviating to `s`.
D1WageSets d1_wage_sets(const PolicyProfile& profile, const MarketParams& params,
                        const Signal& s, Type type, double payoff);

// Same, using the equilibrium payoff; s must be unsent under eq.
D1WageSets d1_wage_sets(const PolicyProfile& profile,
                        const SubgameEquilibrium& eq,
                        const MarketParams& params, const Signal& s, Type type);

// weak ⊊ strict, deciding boundary cases with tol.
bool strictly_contained(const WageInterval& weak, const WageInterval& strict,
                        double tol = kDefaultTol);

// The type the refinement rules out at unsent signal s, if any.
std::optional<Type> d1_excluded_type(const PolicyProfile& profile,
                                     const MarketParams& params,
                                     const Signal& s, double payoff_l,
                                     double payoff_h, double tol = kDefaultTol);

VerificationReport verify_extended_d1(const PolicyProfile& profile,
                                      const SubgameEquilibrium& eq,
                                      const MarketParams& params,
                                      const DeviationGrid& grid,
                                      double tol = kDefaultTol);

// Flags any school where some unsent messages could be dropped while the same
// on-path play, wages and fees remain an equilibrium satisfying the refinement.
VerificationReport check_minimality(const PolicyProfile& profile,
                                    const SubgameEquilibrium& eq,
                                    const MarketParams& params,
                                    double tol = kDefaultTol);

// Completes a strategy into an equilibrium candidate: Bayes beliefs on path;
// off path, the belief the refinement forces, else belief 0.
SubgameEquilibrium assemble_equilibrium(const PolicyProfile& profile,
                                        const MarketParams& params,
                                        const PopulationStrategy& strategy,
                                        ConstructionTag tag,
                                        double tol = kDefaultTol);

inline constexpr std::size_t kMaxOracleGridPoints = 25;
inline constexpr int kMaxOracleSupport = 2;

// Enumerates equilibria whose per-type support has at most `support_cap`
// payoff-distinct enrollment actions plus optionally the outside option.
std::vector<SubgameEquilibrium> brute_force_equilibria(
    const PolicyProfile& profile, const MarketParams& params,
    const DeviationGrid& grid, int support_cap = kMaxOracleSupport,
    double tol = kDefaultTol);

// Same enrollment shares and efforts (snapped to the grid) and on-path wages.
bool outcome_equivalent(const SubgameEquilibrium& a,
                        const SubgameEquilibrium& b, const DeviationGrid& grid,
                        double tol = 1e-6);

}  // namespace signaling
