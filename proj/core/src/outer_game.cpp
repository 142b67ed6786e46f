#include "signaling/outer_game.hpp"

#include <algorithm>
#include <cmath>

#include "signaling/errors.hpp"
#include "signaling/refinement.hpp"

namespace signaling {

namespace {

constexpr OutcomeLabel kAllLabels[] = {
    OutcomeLabel::kMonopolySorting,    OutcomeLabel::kMonopolyScreening,
    OutcomeLabel::kMonopolyCredit,     OutcomeLabel::kRiley,
    OutcomeLabel::kSemipoolingZeroFee, OutcomeLabel::kSemipoolingWithFee,
    OutcomeLabel::kCreditFamily,
};

MarketParams with_schools(const MarketParams& params, int n) {
  MarketParams p = params;
  p.n_schools = n;
  return p;
}

double mixed_wage(const MarketParams& p, double q_h) {
  return (p.lambda * q_h * p.theta_h + (1.0 - p.lambda) * p.theta_l) /
         (p.lambda * q_h + 1.0 - p.lambda);
}

// Inverse of mixed_wage.
double share_for_wage(const MarketParams& p, double w) {
  return (1.0 - p.lambda) * (w - p.theta_l) / (p.lambda * (p.theta_h - w));
}

// Symmetric profile where everyone sees `thresholds` with messages 0..k.
PolicyProfile symmetric_profile(int n, double fee,
                                const std::vector<double>& thresholds) {
  std::vector<MessageId> messages(thresholds.size() + 1);
  for (std::size_t j = 0; j < messages.size(); ++j) {
    messages[j] = static_cast<MessageId>(j);
  }
  return PolicyProfile(static_cast<std::size_t>(n),
                       Policy{fee, StepMonitoringPolicy(thresholds, messages)});
}

// Low types pool at e_l; a share q_h of high types joins them and the rest
// exert e_h. Split evenly over schools.
EquilibriumOutcome pooled_split_outcome(const MarketParams& p, double fee,
                                        double e_l, double e_h, double q_h,
                                        OutcomeLabel label, double tol) {
  std::vector<double> thresholds;
  if (e_l > 0.0) thresholds.push_back(e_l);
  if (q_h < 1.0) thresholds.push_back(e_h);
  PolicyProfile profile = symmetric_profile(p.n_schools, fee, thresholds);
  PopulationStrategy st;
  const double share = 1.0 / p.n_schools;
  for (int i = 0; i < p.n_schools; ++i) {
    st.low.push_back({i, e_l, share});
    st.high.push_back({i, e_l, q_h * share});
    if (q_h < 1.0) st.high.push_back({i, e_h, (1.0 - q_h) * share});
  }
  SubgameEquilibrium eq = assemble_equilibrium(
      profile, p, st, ConstructionTag::kSemiPooling, tol);
  return make_outcome(eq, p, label);
}

}  // namespace

const char* outcome_label_name(OutcomeLabel label) {
  switch (label) {
    case OutcomeLabel::kMonopolySorting:
      return "monopoly_sorting";
    case OutcomeLabel::kMonopolyScreening:
      return "monopoly_screening";
    case OutcomeLabel::kMonopolyCredit:
      return "monopoly_credit";
    case OutcomeLabel::kRiley:
      return "riley";
    case OutcomeLabel::kSemipoolingZeroFee:
      return "semipooling_zero_fee";
    case OutcomeLabel::kSemipoolingWithFee:
      return "semipooling_with_fee";
    case OutcomeLabel::kCreditFamily:
      return "credit_family";
  }
  return "unknown";
}

OutcomeLabel outcome_label_from_name(const std::string& name) {
  for (OutcomeLabel l : kAllLabels) {
    if (name == outcome_label_name(l)) return l;
  }
  throw InputError("field 'label': unknown outcome label '" + name + "'");
}

double EquilibriumOutcome::total_profit() const {
  double total = 0.0;
  for (double p : profits) total += p;
  return total;
}

EquilibriumOutcome make_outcome(const SubgameEquilibrium& eq,
                                const MarketParams& params,
                                OutcomeLabel label) {
  EquilibriumOutcome out;
  out.label = label;
  out.subgame = eq;
  out.profits.assign(eq.profile.size(), 0.0);
  for (Type type : kTypes) {
    double weight = type == Type::kHigh ? params.lambda : 1.0 - params.lambda;
    double enrolled = 0.0;
    double employed = 0.0;
    for (const Action& a : eq.strategy.of(type)) {
      if (!a.school) continue;
      enrolled += a.prob;
      if (offer_at(eq.wages, signal_of(eq.profile, a)).hired) {
        employed += a.prob;
      }
      std::size_t i = static_cast<std::size_t>(*a.school);
      out.profits[i] += eq.profile[i].fee * weight * a.prob;
    }
    (type == Type::kLow ? out.enrollment_l : out.enrollment_h) = enrolled;
    (type == Type::kLow ? out.employment_l : out.employment_h) = employed;
  }
  return out;
}

double school_enrollment(const EquilibriumOutcome& outcome, Type type,
                         int school) {
  double total = 0.0;
  for (const Action& a : outcome.subgame.strategy.of(type)) {
    if (a.school == school) total += a.prob;
  }
  return total;
}

EquilibriumOutcome monopoly_rpbe(const MarketParams& params, double tol) {
  params.validate();
  if (params.n_schools != 1) {
    throw InputError("field 'n_schools': monopoly requires exactly one school");
  }
  const bool sorting = is_sorting(params);
  const double fee = sorting ? expected_type(params) : params.theta_h;
  PolicyProfile profile{Policy{fee, StepMonitoringPolicy::uninformative()}};
  MarketParams p = params;
  p.credit_cap.reset();
  SubgameEquilibrium eq = construct_epbe(profile, p, tol);
  return make_outcome(eq, p,
                      sorting ? OutcomeLabel::kMonopolySorting
                              : OutcomeLabel::kMonopolyScreening);
}

CreditResult credit_monopoly_rpbe(const MarketParams& params, double tol) {
  params.validate();
  if (params.n_schools != 1) {
    throw InputError("field 'n_schools': monopoly requires exactly one school");
  }
  if (!params.credit_cap) {
    throw InputError("field 'credit_cap': required for the capped monopoly");
  }
  const double cap = *params.credit_cap;
  const double mean = expected_type(params);
  MarketParams uncapped = params;
  uncapped.credit_cap.reset();
  if (cap >= params.theta_h || (is_sorting(params) && cap >= mean)) {
    return {monopoly_rpbe(uncapped, tol), std::nullopt};
  }
  PolicyProfile profile{Policy{cap, StepMonitoringPolicy::uninformative()}};
  SubgameEquilibrium eq = construct_epbe(profile, params, tol);
  if (cap >= mean) {
    return {make_outcome(eq, params, OutcomeLabel::kMonopolyCredit),
            std::nullopt};
  }
  CreditFamily family;
  family.fee = cap;
  family.pooling_cutoff_max =
      cost_inverse_effort(params.cost, Type::kLow, mean - cap, tol);
  family.pooling_cutoff_supported = cost_inverse_effort(
      params.cost, Type::kLow, mean - std::max(cap, params.theta_l), tol);
  return {make_outcome(eq, params, OutcomeLabel::kCreditFamily), family};
}

EquilibriumOutcome credit_pooling_member(const MarketParams& params,
                                         double pooled_effort, double tol) {
  CreditResult base = credit_monopoly_rpbe(params, tol);
  if (!base.family) {
    throw DomainError("credit cap does not induce a pooling family");
  }
  if (!(pooled_effort >= 0.0) ||
      pooled_effort > base.family->pooling_cutoff_supported + tol) {
    throw DomainError("pooled effort outside [0, " +
                      std::to_string(base.family->pooling_cutoff_supported) +
                      "]");
  }
  return pooled_split_outcome(params, base.family->fee, pooled_effort, 0.0, 1.0,
                              OutcomeLabel::kCreditFamily, tol);
}

EquilibriumOutcome credit_partial_pooling_member(const MarketParams& params,
                                                 double high_pool_share,
                                                 double pooled_effort,
                                                 double tol) {
  CreditResult base = credit_monopoly_rpbe(params, tol);
  if (!base.family) {
    throw DomainError("credit cap does not induce a pooling family");
  }
  if (!(high_pool_share > 0.0 && high_pool_share < 1.0)) {
    throw InputError("high-type pooling share must lie in (0, 1)");
  }
  if (!(pooled_effort >= 0.0)) throw DomainError("pooled effort is negative");
  const double cap = base.family->fee;
  const double w_l = mixed_wage(params, high_pool_share);
  const double c_low = params.cost(Type::kLow, pooled_effort);
  // Low types must accept the fee and prefer pooling to the zero-effort message.
  if (w_l - c_low < cap - tol ||
      w_l - c_low < std::max(params.theta_l, 0.0) - tol) {
    throw DomainError("pooled wage does not cover the fee and effort cost");
  }
  const double e_h = cost_inverse_effort(
      params.cost, Type::kHigh,
      params.theta_h - w_l + params.cost(Type::kHigh, pooled_effort), tol);
  return pooled_split_outcome(params, cap, pooled_effort, e_h, high_pool_share,
                              OutcomeLabel::kCreditFamily, tol);
}

const char* fierce_reason_name(FierceReason reason) {
  switch (reason) {
    case FierceReason::kNExceedsInvLambda:
      return "n_exceeds_inv_lambda";
    case FierceReason::kNThetaLExceedsMean:
      return "n_thetaL_exceeds_mean";
    case FierceReason::kLossesDominate:
      return "losses_dominate";
  }
  return "unknown";
}

FierceVerdict is_fierce(const MarketParams& params, int n) {
  if (n < 2) throw InputError("field 'n_schools': competition needs n >= 2");
  FierceVerdict v;
  const double dn = static_cast<double>(n);
  if (dn > 1.0 / params.lambda) {
    v.reasons.push_back(FierceReason::kNExceedsInvLambda);
  }
  if (dn * params.theta_l > expected_type(params)) {
    v.reasons.push_back(FierceReason::kNThetaLExceedsMean);
  }
  if (-(dn - 1.0) * params.theta_l >= params.theta_h) {
    v.reasons.push_back(FierceReason::kLossesDominate);
  }
  v.fierce = !v.reasons.empty();
  return v;
}

EquilibriumOutcome riley_rpbe(const MarketParams& params, int n, double tol) {
  if (n < 2) throw InputError("field 'n_schools': competition needs n >= 2");
  MarketParams p = with_schools(params, n);
  p.validate();
  const double e_r = riley_effort(p, std::min(tol, 1e-12));
  PolicyProfile profile = symmetric_profile(n, 0.0, {e_r});
  SubgameEquilibrium eq = construct_epbe(profile, p, tol);
  for (const Action& a : eq.strategy.high) {
    if (!a.school || a.effort != e_r) {
      throw InvariantError("separating play not reproduced at the Riley policy");
    }
  }
  return make_outcome(eq, p, OutcomeLabel::kRiley);
}

SemiPoolingResult semipooling_family(const MarketParams& params, int n,
                                     SemiPoolingVariant variant,
                                     SemiPoolingParam free_param,
                                     std::optional<double> fee, double tol) {
  if (n < 2) throw InputError("field 'n_schools': competition needs n >= 2");
  MarketParams p = with_schools(params, n);
  p.validate();
  const double e_r = riley_effort(p, std::min(tol, 1e-12));
  const double floor_wage = std::max(p.theta_l, 0.0);
  SemiPoolingResult result;

  double f = 0.0;
  double e_l = 0.0, e_h = e_r, q_h = 0.0, w_l = 0.0;
  if (variant == SemiPoolingVariant::kZeroFee) {
    const double required = p.theta_h - p.cost(Type::kHigh, e_r);
    if (const auto* pe = std::get_if<PooledEffort>(&free_param)) {
      if (!(pe->value >= 0.0 && pe->value < e_r)) {
        throw InputError("pooled effort must lie in [0, e^R)");
      }
      e_l = pe->value;
      w_l = required + p.cost(Type::kHigh, e_l);
      q_h = w_l < p.theta_h ? share_for_wage(p, w_l) : 2.0;
    } else {
      q_h = std::get<HighPoolShare>(free_param).value;
      if (!(q_h > 0.0 && q_h < 1.0)) {
        throw InputError("high-type pooling share must lie in (0, 1)");
      }
      w_l = mixed_wage(p, q_h);
      double gap = w_l - required;
      e_l = gap >= 0.0 ? cost_inverse_effort(p.cost, Type::kHigh, gap, tol)
                       : -1.0;
    }
    if (expected_type(p) <= required) {
      result.certificate =
          SemiPoolingCertificate{expected_type(p), required};
      return result;
    }
  } else {
    if (!fee) throw InputError("field 'fee': required for the with-fee variant");
    f = *fee;
    if (!(f > 0.0) || !mild_fee_set(p, n).contains(f)) {
      throw InputError("field 'fee': not an admissible positive symmetric fee");
    }
    if (const auto* pe = std::get_if<PooledEffort>(&free_param)) {
      if (!(pe->value >= 0.0)) throw InputError("pooled effort is negative");
      e_l = pe->value;
      w_l = f + p.cost(Type::kLow, e_l);
      q_h = w_l < p.theta_h ? share_for_wage(p, w_l) : 2.0;
    } else {
      q_h = std::get<HighPoolShare>(free_param).value;
      if (!(q_h > 0.0 && q_h < 1.0)) {
        throw InputError("high-type pooling share must lie in (0, 1)");
      }
      w_l = mixed_wage(p, q_h);
      e_l = w_l >= f ? cost_inverse_effort(p.cost, Type::kLow, w_l - f, tol)
                     : -1.0;
    }
    if (e_l >= 0.0 && w_l < p.theta_h) {
      e_h = cost_inverse_effort(
          p.cost, Type::kHigh,
          p.theta_h - w_l + p.cost(Type::kHigh, e_l), tol);
    }
  }

  bool feasible = q_h > 0.0 && q_h < 1.0 && e_l >= 0.0 && e_l < e_h &&
                  w_l > floor_wage && w_l < p.theta_h &&
                  w_l - p.cost(Type::kLow, e_l) >= floor_wage - tol;
  if (variant == SemiPoolingVariant::kZeroFee) {
    feasible = feasible && e_l < e_r;
  }
  if (!feasible) return result;

  OutcomeLabel label = variant == SemiPoolingVariant::kZeroFee
                           ? OutcomeLabel::kSemipoolingZeroFee
                           : OutcomeLabel::kSemipoolingWithFee;
  EquilibriumOutcome member =
      pooled_split_outcome(p, f, e_l, e_h, q_h, label, tol);
  if (variant == SemiPoolingVariant::kWithFee) {
    DeviationGrid grid = threshold_grid(member.profile());
    if (!verify_pbe(member.profile(), member.subgame, p, grid, 1e-7).passed() ||
        !verify_extended_d1(member.profile(), member.subgame, p, grid, 1e-7)
             .passed()) {
      return result;
    }
  }
  result.members.push_back(std::move(member));
  result.terms.push_back({e_l, e_h, q_h, w_l, f});
  return result;
}

bool FeeSet::contains(double fee) const {
  if (has_zero_point && fee == 0.0) return true;
  if (!has_interval) return false;
  bool above = lo_closed ? fee >= lo : fee > lo;
  bool below = hi_closed ? fee <= hi : fee < hi;
  return above && below;
}

FeeSet mild_fee_set(const MarketParams& params, int n) {
  FeeSet set;
  if (is_fierce(params, n).fierce) {
    set.has_zero_point = true;
    return set;
  }
  const double dn = static_cast<double>(n);
  if (is_sorting(params)) {
    set.has_zero_point = true;
    double lo = dn * params.theta_l;
    double hi = std::min(params.theta_h,
                         expected_type(params) / (params.lambda * dn));
    if (lo < hi) {
      set.has_interval = true;
      set.lo = lo;
      set.hi = hi;
      set.lo_closed = true;
      set.hi_closed = false;
    }
  } else {
    set.has_interval = true;
    set.lo = 0.0;
    set.hi = std::max((params.theta_h + (dn - 1.0) * params.theta_l) / dn, 0.0);
    set.lo_closed = true;
    set.hi_closed = true;
  }
  return set;
}

WelfareReport welfare(const EquilibriumOutcome& outcome,
                      const MarketParams& params) {
  WelfareReport r;
  const double lam = params.lambda;
  r.productivity_term = lam * params.theta_h * outcome.employment_h +
                        (1.0 - lam) * params.theta_l * outcome.employment_l;
  for (Type type : kTypes) {
    double weight = type == Type::kHigh ? lam : 1.0 - lam;
    for (const Action& a : outcome.subgame.strategy.of(type)) {
      if (a.school) r.effort_waste += weight * a.prob * params.cost(type, a.effort);
    }
  }
  r.total = r.productivity_term - r.effort_waste;
  r.student_surplus_l = (1.0 - lam) * outcome.payoff(Type::kLow);
  r.student_surplus_h = lam * outcome.payoff(Type::kHigh);
  r.school_profit_total = outcome.total_profit();
  r.max_welfare = max_welfare(params);
  return r;
}

EquilibriumOutcome select_iis(const std::vector<EquilibriumOutcome>& family,
                              const MarketParams& params, int n) {
  (void)params;
  (void)n;
  if (family.empty()) throw InvariantError("empty equilibrium family");
  // Semi-pooling members fail the independence-of-irrelevant-school property,
  // leaving the separating outcome.
  for (const EquilibriumOutcome& o : family) {
    if (o.label == OutcomeLabel::kRiley) return o;
  }
  throw InvariantError("family has no Riley member");
}

}  // namespace signaling
