#include <gtest/gtest.h>

#include <random>

#include "signaling/errors.hpp"
#include "signaling/market.hpp"
#include "support.hpp"

using namespace signaling;
using signaling::testing::market;

TEST(ExpectedType, HandValues) {
  EXPECT_NEAR(expected_type(market(2.0, 1.0, 0.5)), 1.5, 1e-12);
  EXPECT_EQ(expected_type(market(1.0, -1.0, 0.5)), 0.0);
  EXPECT_NEAR(expected_type(market(2.0, -1.0, 0.5)), 0.5, 1e-12);
}

TEST(ExpectedType, StrictlyBetweenTypes) {
  for (double lambda = 0.05; lambda < 1.0; lambda += 0.05) {
    for (double theta_l : {-3.0, -0.5, 0.0, 0.7, 1.9}) {
      MarketParams p = market(2.0, theta_l, lambda);
      EXPECT_GT(expected_type(p), theta_l);
      EXPECT_LT(expected_type(p), 2.0);
    }
  }
}

TEST(Sorting, BoundaryZeroIsSorting) {
  EXPECT_TRUE(is_sorting(market(2.0, 0.0, 0.5)));
  EXPECT_FALSE(is_sorting(market(2.0, -1e-12, 0.5)));
}

TEST(Cost, HandValues) {
  CostFamily lin = CostFamily::linear(2.0, 1.0);
  EXPECT_EQ(cost(lin, Type::kHigh, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(cost(lin, Type::kLow, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(cost(CostFamily::power(2.0, 1.0, 2.0), Type::kHigh, 3.0), 9.0);
}

TEST(Cost, Errors) {
  CostFamily lin = CostFamily::linear(2.0, 1.0);
  EXPECT_THROW(cost(lin, Type::kLow, -0.1), DomainError);
  CostFamily tab = CostFamily::tabulated({0.0, 1.0, 2.0}, {0.0, 2.0, 5.0}, {0.0, 1.0, 2.0});
  EXPECT_DOUBLE_EQ(cost(tab, Type::kLow, 1.5), 3.5);
  EXPECT_THROW(cost(tab, Type::kLow, 2.5), RangeError);
}

TEST(CostFamily, ValidationNamesField) {
  try {
    CostFamily::linear(-1.0, 1.0);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("kappa_L"), std::string::npos);
  }
  EXPECT_THROW(CostFamily::tabulated({0.0, 1.0}, {0.0}, {0.0, 1.0}), InputError);
}

TEST(CostInverse, HandValues) {
  CostFamily lin = CostFamily::linear(2.0, 1.0);
  EXPECT_NEAR(cost_inverse_effort(lin, Type::kLow, 1.0), 0.5, 1e-9);
  EXPECT_EQ(cost_inverse_effort(lin, Type::kHigh, 0.0), 0.0);
  EXPECT_NEAR(cost_inverse_effort(CostFamily::power(2.0, 1.0, 2.0), Type::kHigh, 9.0),
              3.0, 1e-9);
  CostFamily tab = CostFamily::tabulated({0.0, 1.0, 2.0}, {0.0, 2.0, 5.0}, {0.0, 1.0, 2.0});
  EXPECT_NEAR(cost_inverse_effort(tab, Type::kLow, 3.5), 1.5, 1e-9);
}

TEST(CostInverse, BeyondTableIsNumericErrorWithBracket) {
  CostFamily tab = CostFamily::tabulated({0.0, 1.0}, {0.0, 2.0}, {0.0, 1.0});
  try {
    cost_inverse_effort(tab, Type::kLow, 3.0);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_EQ(e.lo(), 0.0);
    EXPECT_EQ(e.hi(), 1.0);
  }
}

TEST(CostInverse, RoundTripProperty) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> effort(0.0, 100.0);
  const CostFamily families[] = {CostFamily::linear(2.0, 1.0),
                                 CostFamily::linear(3.5, 0.2),
                                 CostFamily::power(2.0, 1.0, 2.0),
                                 CostFamily::power(1.5, 1.2, 1.5)};
  for (const CostFamily& cf : families) {
    for (int k = 0; k < 200; ++k) {
      double e = effort(rng);
      for (Type t : kTypes) {
        EXPECT_NEAR(cost_inverse_effort(cf, t, cf(t, e)), e, 1e-9 * std::max(1.0, e));
      }
    }
  }
}

TEST(Bisection, ConvergesAndReportsBracket) {
  EXPECT_NEAR(bisect_increasing([](double x) { return x * x * x; }, 27.0, 1e-12), 3.0,
              1e-9);
  try {
    bisect_increasing([](double x) { return 1.0 - std::exp(-x); }, 2.0, 1e-9, 1.0, 64.0);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_EQ(e.hi(), 64.0);
  }
}

TEST(DecreasingDifferences, HandExamples) {
  EXPECT_TRUE(check_decreasing_differences(CostFamily::linear(2.0, 1.0), {0.0, 1.0, 2.0})
                  .passed());
  auto flat = check_decreasing_differences(CostFamily::linear(1.0, 1.0), {0.0, 1.0});
  ASSERT_FALSE(flat.passed());
  EXPECT_EQ(flat.violations.front().lo_index, 0u);
  EXPECT_EQ(flat.violations.front().hi_index, 1u);
  CostFamily bad = CostFamily::tabulated({0.0, 1.0}, {0.0, 1.0}, {0.0, 2.0});
  EXPECT_FALSE(check_decreasing_differences(bad, {0.0, 1.0}).passed());
  EXPECT_THROW(check_decreasing_differences(CostFamily::linear(2.0, 1.0), {1.0, 0.0}),
               InputError);
  EXPECT_THROW(check_decreasing_differences(CostFamily::linear(2.0, 1.0), {0.0, 0.0}),
               InputError);
}

TEST(DecreasingDifferences, SlopeOrderDecides) {
  for (double kl = 0.5; kl <= 3.0; kl += 0.25) {
    for (double kh = 0.25; kh <= 3.0; kh += 0.25) {
      for (double p : {1.0, 2.0}) {
        bool passed = check_decreasing_differences(CostFamily::power(kl, kh, p),
                                                   {0.0, 0.5, 1.0, 2.0})
                          .passed();
        EXPECT_EQ(passed, kh < kl) << kl << " " << kh << " " << p;
      }
    }
  }
}

TEST(RileyEffort, HandValues) {
  EXPECT_NEAR(riley_effort(market(2.0, -1.0, 0.5)), 1.0, 1e-9);
  EXPECT_NEAR(riley_effort(market(2.0, 1.0, 0.5)), 0.5, 1e-9);
  EXPECT_NEAR(riley_effort(market(1.0, -1.0, 0.5)), 0.5, 1e-9);
}

TEST(RileyEffort, MonotoneLadders) {
  double prev = 0.0;
  for (double th = 1.0; th <= 5.0; th += 0.25) {
    double e = riley_effort(market(th, 0.5, 0.5));
    EXPECT_GT(e, prev);
    prev = e;
  }
  prev = 1e9;
  for (double tl = -2.0; tl < 1.9; tl += 0.1) {
    double e = riley_effort(market(2.0, tl, 0.5));
    EXPECT_LE(e, prev + 1e-15);
    prev = e;
  }
}

TEST(MarketParams, ValidationNamesFields) {
  auto message = [](MarketParams p) {
    try {
      p.validate();
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(market(-1.0, -2.0, 0.5)).find("theta_H"), std::string::npos);
  EXPECT_NE(message(market(2.0, 3.0, 0.5)).find("theta_L"), std::string::npos);
  EXPECT_NE(message(market(2.0, 1.0, 1.0)).find("lambda"), std::string::npos);
  EXPECT_NE(message(market(2.0, 1.0, 0.5, 1.0, 2.0)).find("cost"), std::string::npos);
  EXPECT_EQ(message(market(2.0, 1.0, 0.5)), "");
}
