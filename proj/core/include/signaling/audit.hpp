#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signaling/outer_game.hpp"

namespace signaling {

struct AuditGrids {
  std::vector<double> fees;        // deviation fees, within [0, theta_h]
  std::vector<double> thresholds;  // positive cutoffs for single-threshold policies
  // Template effort step and fee margin; default to the smallest threshold and
  // a tenth of it.
  std::optional<double> epsilon;
  std::optional<double> gamma;
};

// `points` fees on [0, theta_h] and `points - 1` cutoffs on
// (0, 2 * max(e^R, largest threshold)].
AuditGrids make_audit_grids(const EquilibriumOutcome& outcome,
                            const MarketParams& params, int points = 21);

enum class ContinuationMode { kCanonical, kPessimistic };

struct Deviation {
  int school = 0;
  std::string kind;
  Policy policy;
};

struct AuditReport {
  double max_gain = 0.0;
  std::optional<Deviation> best;
  std::size_t deviations_checked = 0;
  // Pessimistic mode only: deviations priced by the oracle, and those that fell
  // back to the canonical continuation (too many signals, or no oracle member).
  std::size_t oracle_evaluated = 0;
  std::size_t canonical_fallbacks = 0;
  double epsilon = 0.0;
  double gamma = 0.0;
};

// Profit gain of the best unilateral policy deviation found.
AuditReport deviation_audit(const EquilibriumOutcome& outcome,
                            const MarketParams& params, const AuditGrids& grids,
                            double tol = kDefaultTol,
                            ContinuationMode mode = ContinuationMode::kCanonical,
                            int jobs = 1);

// Oracle pricing is attempted only on profiles with at most this many signals.
inline constexpr std::size_t kMaxPessimisticSignals = 6;

}  // namespace signaling
