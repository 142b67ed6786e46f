#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "signaling/epbe.hpp"
#include "signaling/equilibrium.hpp"

namespace signaling {

enum class OutcomeLabel {
  kMonopolySorting,
  kMonopolyScreening,
  kMonopolyCredit,
  kRiley,
  kSemipoolingZeroFee,
  kSemipoolingWithFee,
  kCreditFamily,
};

const char* outcome_label_name(OutcomeLabel label);
OutcomeLabel outcome_label_from_name(const std::string& name);

// An equilibrium of the full game: policies plus the induced subgame play.
struct EquilibriumOutcome {
  OutcomeLabel label = OutcomeLabel::kRiley;
  SubgameEquilibrium subgame;
  std::vector<double> profits;
  double enrollment_l = 0.0;
  double enrollment_h = 0.0;
  double employment_l = 0.0;
  double employment_h = 0.0;

  const PolicyProfile& profile() const { return subgame.profile; }
  double payoff(Type type) const { return subgame.payoff(type); }
  double enrollment(Type type) const {
    return type == Type::kLow ? enrollment_l : enrollment_h;
  }
  double employment(Type type) const {
    return type == Type::kLow ? employment_l : employment_h;
  }
  double total_profit() const;

  bool operator==(const EquilibriumOutcome& other) const = default;
};

// Fills profits, enrollment and employment from the subgame play.
EquilibriumOutcome make_outcome(const SubgameEquilibrium& eq,
                                const MarketParams& params, OutcomeLabel label);

// Enrollment share of a type at a school.
double school_enrollment(const EquilibriumOutcome& outcome, Type type,
                         int school);

EquilibriumOutcome monopoly_rpbe(const MarketParams& params,
                                 double tol = kDefaultTol);

// Positive-effort members with a binding credit cap below E[theta].
struct CreditFamily {
  double fee = 0.0;
  // Largest common effort of the full-pooling family: K + c(L, e') = E[theta].
  double pooling_cutoff_max = 0.0;
  // Largest common effort at which low types also prefer pooling to the
  // zero-effort message; below pooling_cutoff_max when theta_l > K.
  double pooling_cutoff_supported = 0.0;
};

struct CreditResult {
  EquilibriumOutcome outcome;  // unique outcome, or the zero-effort member
  std::optional<CreditFamily> family;
};

CreditResult credit_monopoly_rpbe(const MarketParams& params,
                                  double tol = kDefaultTol);

// Everyone pools at effort e_l under the cap: cutoff policy at e_l, fee K.
EquilibriumOutcome credit_pooling_member(const MarketParams& params,
                                         double pooled_effort,
                                         double tol = kDefaultTol);

// Low types and a share q_h of high types pool at e_l; the rest of the high
// types separate at the effort that keeps them indifferent. Fee K.
EquilibriumOutcome credit_partial_pooling_member(const MarketParams& params,
                                                 double high_pool_share,
                                                 double pooled_effort,
                                                 double tol = kDefaultTol);

enum class FierceReason { kNExceedsInvLambda, kNThetaLExceedsMean, kLossesDominate };

const char* fierce_reason_name(FierceReason reason);

struct FierceVerdict {
  bool fierce = false;
  std::vector<FierceReason> reasons;
};

FierceVerdict is_fierce(const MarketParams& params, int n);

EquilibriumOutcome riley_rpbe(const MarketParams& params, int n,
                              double tol = kDefaultTol);

enum class SemiPoolingVariant { kZeroFee, kWithFee };

struct PooledEffort {
  double value = 0.0;
};
struct HighPoolShare {
  double value = 0.0;
};
using SemiPoolingParam = std::variant<PooledEffort, HighPoolShare>;

// Why a zero-fee family is empty: even the best pooled wage cannot match the
// separating payoff of high types.
struct SemiPoolingCertificate {
  double sup_pooled_wage = 0.0;    // E[theta]
  double required_wage = 0.0;      // theta_h - c(H, e^R)
};

struct SemiPoolingResult {
  std::vector<EquilibriumOutcome> members;
  std::optional<SemiPoolingCertificate> certificate;

  // Parameters of each member, aligned with `members`.
  struct Terms {
    double pooled_effort;
    double high_effort;
    double high_pool_share;
    double pooled_wage;
    double fee;
  };
  std::vector<Terms> terms;
};

// `fee` is required for the with-fee variant and must lie in mild_fee_set.
SemiPoolingResult semipooling_family(const MarketParams& params, int n,
                                     SemiPoolingVariant variant,
                                     SemiPoolingParam free_param,
                                     std::optional<double> fee = std::nullopt,
                                     double tol = kDefaultTol);

// Union of an optional isolated point {0} and an optional interval.
struct FeeSet {
  bool has_zero_point = false;
  bool has_interval = false;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double fee) const;
};

FeeSet mild_fee_set(const MarketParams& params, int n);

struct WelfareReport {
  double productivity_term = 0.0;
  double effort_waste = 0.0;
  double total = 0.0;
  double student_surplus_l = 0.0;  // (1 - lambda) U_L
  double student_surplus_h = 0.0;  // lambda U_H
  double school_profit_total = 0.0;
  double max_welfare = 0.0;
};

WelfareReport welfare(const EquilibriumOutcome& outcome,
                      const MarketParams& params);

EquilibriumOutcome select_iis(const std::vector<EquilibriumOutcome>& family,
                              const MarketParams& params, int n);

}  // namespace signaling
