#include <gtest/gtest.h>

#include "signaling/errors.hpp"
#include "signaling/outer_game.hpp"
#include "signaling/refinement.hpp"
#include "support.hpp"

using namespace signaling;
using namespace signaling::testing;

namespace {

// U and profits reproduce welfare once fees and wages net out.
void expect_welfare_identity(const EquilibriumOutcome& o, const MarketParams& p) {
  WelfareReport w = welfare(o, p);
  double profits = 0.0;
  for (double pi : o.profits) profits += pi;
  EXPECT_NEAR(w.total,
              p.lambda * o.payoff(Type::kHigh) + (1.0 - p.lambda) * o.payoff(Type::kLow) +
                  profits,
              1e-9);
}

std::vector<MarketParams> ladder() {
  std::vector<MarketParams> out;
  for (double tl : {-2.0, -1.0, -0.3, 0.0, 0.4, 1.0, 1.6}) {
    for (double lambda : {0.2, 0.5, 0.8}) {
      for (double kh : {0.5, 1.0, 1.8}) out.push_back(market(2.0, tl, lambda, 2.0, kh));
    }
  }
  return out;
}

}  // namespace

TEST(Monopoly, HandValues) {
  EquilibriumOutcome s = monopoly_rpbe(sorting());
  EXPECT_NEAR(s.profile()[0].fee, 1.5, 1e-12);
  EXPECT_NEAR(s.total_profit(), 1.5, 1e-9);
  EXPECT_NEAR(welfare(s, sorting()).total, 1.5, 1e-9);

  EquilibriumOutcome c = monopoly_rpbe(screening());
  EXPECT_NEAR(c.profile()[0].fee, 2.0, 1e-12);
  EXPECT_NEAR(c.total_profit(), 1.0, 1e-9);
  EXPECT_EQ(c.enrollment(Type::kLow), 0.0);

  MarketParams zero = market(2.0, 0.0, 0.5);
  EquilibriumOutcome z = monopoly_rpbe(zero);
  EXPECT_NEAR(z.profile()[0].fee, 1.0, 1e-12);
  EXPECT_EQ(z.enrollment(Type::kLow), 1.0);
  EXPECT_EQ(z.enrollment(Type::kHigh), 1.0);

  EXPECT_THROW(monopoly_rpbe(sorting(2)), InputError);
}

TEST(Monopoly, ExtractsMaximumWelfareOnLadders) {
  for (const MarketParams& p : ladder()) {
    EquilibriumOutcome o = monopoly_rpbe(p);
    EXPECT_NEAR(welfare(o, p).total, max_welfare(p), 1e-9);
    EXPECT_NEAR(o.payoff(Type::kLow), 0.0, 1e-9);
    EXPECT_NEAR(o.payoff(Type::kHigh), 0.0, 1e-9);
    expect_welfare_identity(o, p);
  }
}

TEST(Credit, ScreeningCapPoolsSomeLowTypes) {
  MarketParams p = screening();
  p.credit_cap = 1.0;
  CreditResult r = credit_monopoly_rpbe(p);
  EXPECT_FALSE(r.family.has_value());
  EXPECT_NEAR(r.outcome.enrollment(Type::kLow), 0.5, 1e-9);
  EXPECT_NEAR(r.outcome.total_profit(), 0.75, 1e-9);
  EXPECT_NEAR(r.outcome.subgame.wages.at({0, 0}).value(), 1.0, 1e-9);
}

TEST(Credit, CapBetweenMeanAndTopType) {
  for (double cap = 0.5; cap < 2.0; cap += 0.1) {
    MarketParams p = screening();
    p.credit_cap = cap;
    CreditResult r = credit_monopoly_rpbe(p);
    double alpha = r.outcome.enrollment(Type::kLow);
    // Pooled wage equal to the cap: lambda (2 - K) = (1 - lambda) alpha (K + 1).
    double hand = p.lambda * (2.0 - cap) / ((1.0 - p.lambda) * (cap + 1.0));
    EXPECT_GT(alpha, 0.0);
    EXPECT_LE(alpha, 1.0 + 1e-12);
    EXPECT_NEAR(alpha, std::min(hand, 1.0), 1e-9) << cap;
    EXPECT_NEAR(r.outcome.subgame.wages.at({0, 0}).value(), cap, 1e-9) << cap;
    expect_welfare_identity(r.outcome, p);
  }
}

TEST(Credit, SortingCapBelowMeanGivesFamily) {
  MarketParams p = sorting();
  p.credit_cap = 1.0;
  CreditResult r = credit_monopoly_rpbe(p);
  ASSERT_TRUE(r.family.has_value());
  EXPECT_EQ(r.family->fee, 1.0);
  EXPECT_NEAR(r.family->pooling_cutoff_max, 0.25, 1e-9);
  EXPECT_NEAR(r.outcome.total_profit(), 1.0, 1e-9);
  EXPECT_EQ(r.outcome.enrollment(Type::kLow), 1.0);
  EXPECT_EQ(r.outcome.enrollment(Type::kHigh), 1.0);
  EXPECT_NEAR(r.outcome.subgame.wages.at({0, 0}).value(), 1.5, 1e-9);
  EXPECT_NEAR(r.outcome.payoff(Type::kLow), 0.5, 1e-9);
  EXPECT_NEAR(r.outcome.payoff(Type::kHigh), 0.5, 1e-9);
}

TEST(Credit, PoolingMembersVerify) {
  MarketParams p = market(2.0, 0.2, 0.5);
  p.credit_cap = 0.5;
  CreditResult r = credit_monopoly_rpbe(p);
  ASSERT_TRUE(r.family);
  for (double t : {0.0, 0.5, 1.0}) {
    double e = t * r.family->pooling_cutoff_supported;
    EquilibriumOutcome o = credit_pooling_member(p, e);
    DeviationGrid grid = threshold_grid(o.profile());
    EXPECT_TRUE(verify_pbe(o.profile(), o.subgame, p, grid, 1e-7).passed()) << e;
    EXPECT_NEAR(o.total_profit(), 0.5, 1e-9);
    expect_welfare_identity(o, p);
  }
  EXPECT_THROW(credit_pooling_member(p, r.family->pooling_cutoff_supported + 0.1),
               DomainError);
}

TEST(Credit, DelegatesWhenCapDoesNotBind) {
  MarketParams p = sorting();
  p.credit_cap = 1.6;
  CreditResult r = credit_monopoly_rpbe(p);
  EXPECT_FALSE(r.family);
  EXPECT_NEAR(r.outcome.total_profit(), 1.5, 1e-9);
  MarketParams q = screening();
  q.credit_cap = 5.0;
  EXPECT_NEAR(credit_monopoly_rpbe(q).outcome.total_profit(), 1.0, 1e-9);
  MarketParams bad = screening();
  bad.credit_cap = -1.0;
  EXPECT_THROW(credit_monopoly_rpbe(bad), InputError);
}

TEST(Fierce, HandVerdicts) {
  FierceVerdict a = is_fierce(market(2.0, -1.0, 0.4), 3);
  EXPECT_TRUE(a.fierce);
  EXPECT_EQ(a.reasons.front(), FierceReason::kNExceedsInvLambda);
  FierceVerdict b = is_fierce(sorting(), 2);
  EXPECT_TRUE(b.fierce);
  EXPECT_EQ(b.reasons, std::vector<FierceReason>{FierceReason::kNThetaLExceedsMean});
  EXPECT_FALSE(is_fierce(screening(), 2).fierce);
  EXPECT_THROW(is_fierce(screening(), 1), InputError);
}

TEST(Riley, HandValues) {
  EquilibriumOutcome s = riley_rpbe(screening(2), 2);
  EXPECT_NEAR(welfare(s, screening(2)).total, 0.5, 1e-9);
  EXPECT_NEAR(s.payoff(Type::kHigh), 1.0, 1e-9);
  EXPECT_NEAR(s.payoff(Type::kLow), 0.0, 1e-9);
  EquilibriumOutcome t = riley_rpbe(sorting(2), 2);
  EXPECT_NEAR(welfare(t, sorting(2)).total, 1.25, 1e-9);
  EXPECT_THROW(riley_rpbe(screening(), 1), InputError);
}

TEST(SemiPooling, HandValues) {
  MarketParams p = market(2.0, -1.0, 0.5, 2.0, 1.8, 2);
  auto a = semipooling_family(p, 2, SemiPoolingVariant::kZeroFee, PooledEffort{0.0});
  ASSERT_EQ(a.terms.size(), 1u);
  EXPECT_NEAR(a.terms[0].high_pool_share, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(a.terms[0].pooled_wage, 0.2, 1e-9);
  auto b = semipooling_family(p, 2, SemiPoolingVariant::kZeroFee, PooledEffort{0.1});
  ASSERT_EQ(b.terms.size(), 1u);
  EXPECT_NEAR(b.terms[0].pooled_wage, 0.38, 1e-9);
  EXPECT_NEAR(b.terms[0].high_pool_share, 1.38 / 1.62, 1e-9);
  auto c = semipooling_family(p, 2, SemiPoolingVariant::kZeroFee, HighPoolShare{2.0 / 3.0});
  ASSERT_EQ(c.terms.size(), 1u);
  EXPECT_NEAR(c.terms[0].pooled_effort, 0.0, 1e-9);
}

TEST(SemiPooling, EmptyWithCertificate) {
  MarketParams p = market(2.0, -1.0, 0.5, 2.0, 1.0, 2);
  for (double q : {0.1, 0.5, 0.9}) {
    auto r = semipooling_family(p, 2, SemiPoolingVariant::kZeroFee, HighPoolShare{q});
    EXPECT_TRUE(r.members.empty());
    ASSERT_TRUE(r.certificate);
    EXPECT_NEAR(r.certificate->sup_pooled_wage, 0.5, 1e-12);
    EXPECT_NEAR(r.certificate->required_wage, 1.0, 1e-9);
  }
}

TEST(SemiPooling, FreeParameterRange) {
  MarketParams p = market(2.0, -1.0, 0.5, 2.0, 1.8, 2);
  EXPECT_THROW(semipooling_family(p, 2, SemiPoolingVariant::kZeroFee, HighPoolShare{1.0}),
               InputError);
  EXPECT_THROW(semipooling_family(p, 2, SemiPoolingVariant::kZeroFee, PooledEffort{1.0}),
               InputError);
  EXPECT_THROW(semipooling_family(p, 2, SemiPoolingVariant::kWithFee, PooledEffort{0.0}),
               InputError);
}

TEST(SemiPooling, MemberInvariants) {
  int members = 0;
  for (double kh : {1.2, 1.5, 1.8, 1.95}) {
    for (double tl : {-1.0, -0.5, 0.0, 0.5}) {
      MarketParams p = market(2.0, tl, 0.5, 2.0, kh, 2);
      double e_r = riley_effort(p);
      for (double t : {0.0, 0.2, 0.5, 0.8}) {
        auto fam = semipooling_family(p, 2, SemiPoolingVariant::kZeroFee,
                                      PooledEffort{t * e_r});
        for (std::size_t k = 0; k < fam.terms.size(); ++k) {
          ++members;
          const auto& m = fam.terms[k];
          EXPECT_GT(m.pooled_wage, std::max(tl, 0.0));
          EXPECT_LT(m.pooled_wage, p.theta_h);
          EXPECT_LT(m.pooled_effort, e_r);
          EXPECT_NEAR(m.pooled_wage - p.cost(Type::kHigh, m.pooled_effort),
                      p.theta_h - p.cost(Type::kHigh, m.high_effort), 1e-9);
          EXPECT_LT(welfare(fam.members[k], p).total, max_welfare(p) - 1e-9);
          expect_welfare_identity(fam.members[k], p);
        }
      }
    }
  }
  EXPECT_GT(members, 0);
}

TEST(FeeSets, HandValues) {
  FeeSet a = mild_fee_set(market(2.0, 0.5, 0.5), 2);
  EXPECT_TRUE(a.has_zero_point);
  EXPECT_EQ(a.lo, 1.0);
  EXPECT_EQ(a.hi, 1.25);
  EXPECT_TRUE(a.contains(0.0));
  EXPECT_TRUE(a.contains(1.0));
  EXPECT_FALSE(a.contains(1.25));
  EXPECT_FALSE(a.contains(0.5));
  FeeSet b = mild_fee_set(screening(), 2);
  EXPECT_EQ(b.lo, 0.0);
  EXPECT_EQ(b.hi, 0.5);
  EXPECT_TRUE(b.contains(0.5));
  FeeSet c = mild_fee_set(market(2.0, -3.0, 0.5), 2);
  EXPECT_TRUE(c.has_zero_point);
  EXPECT_FALSE(c.has_interval);
}

TEST(Fierce, ZeroFeesEverywhere) {
  for (const MarketParams& base : ladder()) {
    for (int n : {2, 3, 5}) {
      MarketParams p = base;
      p.n_schools = n;
      if (!is_fierce(p, n).fierce) continue;
      std::vector<EquilibriumOutcome> outs{riley_rpbe(p, n)};
      auto fam = semipooling_family(p, n, SemiPoolingVariant::kZeroFee, PooledEffort{0.0});
      outs.insert(outs.end(), fam.members.begin(), fam.members.end());
      for (const auto& o : outs) {
        for (const Policy& pol : o.profile()) EXPECT_EQ(pol.fee, 0.0);
      }
    }
  }
}

TEST(Welfare, HandValues) {
  WelfareReport m = welfare(monopoly_rpbe(screening()), screening());
  EXPECT_NEAR(m.total, 1.0, 1e-9);
  EXPECT_EQ(m.effort_waste, 0.0);
  EXPECT_NEAR(m.school_profit_total, 1.0, 1e-9);
  WelfareReport r = welfare(riley_rpbe(screening(2), 2), screening(2));
  EXPECT_NEAR(r.total, 0.5, 1e-9);
  EXPECT_NEAR(r.effort_waste, 0.5, 1e-9);
  EXPECT_NEAR(r.student_surplus_h + r.student_surplus_l, 0.5, 1e-9);
  EXPECT_EQ(r.school_profit_total, 0.0);

  MarketParams p = sorting();
  SubgameEquilibrium idle;
  idle.profile = {{0.0, {}}};
  idle.strategy.low = {{std::nullopt, 0.0, 1.0}};
  idle.strategy.high = {{std::nullopt, 0.0, 1.0}};
  idle.wages[{0, 0}] = Offer::hire(1.5);
  idle.beliefs[{0, 0}] = 0.5;
  EXPECT_EQ(welfare(make_outcome(idle, p, OutcomeLabel::kRiley), p).total, 0.0);
}

TEST(Welfare, CompetitionBelowMaximum) {
  for (const MarketParams& base : ladder()) {
    MarketParams p = base;
    p.n_schools = 2;
    EquilibriumOutcome o = riley_rpbe(p, 2);
    EXPECT_LT(welfare(o, p).total, max_welfare(p) - 1e-9);
    expect_welfare_identity(o, p);
  }
}

TEST(SelectIis, PicksRiley) {
  MarketParams p = market(2.0, -1.0, 0.5, 2.0, 1.8, 2);
  EquilibriumOutcome riley = riley_rpbe(p, 2);
  auto fam = semipooling_family(p, 2, SemiPoolingVariant::kZeroFee, PooledEffort{0.0});
  ASSERT_EQ(fam.members.size(), 1u);
  EXPECT_EQ(select_iis({fam.members[0], riley}, p, 2), riley);
  EXPECT_EQ(select_iis({riley}, p, 2), riley);
  EXPECT_THROW(select_iis({}, p, 2), InvariantError);
  EXPECT_THROW(select_iis({fam.members[0]}, p, 2), InvariantError);
}

TEST(OutcomeLabel, NamesRoundTrip) {
  for (OutcomeLabel l :
       {OutcomeLabel::kMonopolySorting, OutcomeLabel::kMonopolyScreening,
        OutcomeLabel::kMonopolyCredit, OutcomeLabel::kRiley, OutcomeLabel::kSemipoolingZeroFee,
        OutcomeLabel::kSemipoolingWithFee, OutcomeLabel::kCreditFamily}) {
    EXPECT_EQ(outcome_label_from_name(outcome_label_name(l)), l);
  }
  EXPECT_THROW(outcome_label_from_name("nope"), InputError);
}

TEST(SemiPooling, WithFeeMember) {
  MarketParams p = screening(2);
  auto r = semipooling_family(p, 2, SemiPoolingVariant::kWithFee, PooledEffort{0.0}, 0.1);
  ASSERT_EQ(r.terms.size(), 1u);
  // Pooled wage equals the fee: (2q - 1) / (q + 1) = 0.1.
  EXPECT_NEAR(r.terms[0].high_pool_share, 1.1 / 1.9, 1e-9);
  EXPECT_NEAR(r.terms[0].pooled_wage, 0.1, 1e-9);
  const EquilibriumOutcome& o = r.members[0];
  EXPECT_EQ(o.label, OutcomeLabel::kSemipoolingWithFee);
  for (const Policy& pol : o.profile()) EXPECT_EQ(pol.fee, 0.1);
  DeviationGrid grid = threshold_grid(o.profile());
  EXPECT_TRUE(verify_pbe(o.profile(), o.subgame, p, grid, 1e-7).passed());
  EXPECT_TRUE(verify_extended_d1(o.profile(), o.subgame, p, grid, 1e-7).passed());
  expect_welfare_identity(o, p);
  EXPECT_THROW(semipooling_family(p, 2, SemiPoolingVariant::kWithFee, PooledEffort{0.0}, 0.6),
               InputError);
}
