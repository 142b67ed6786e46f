#include <gtest/gtest.h>

#include <random>

#include "signaling/errors.hpp"
#include "signaling/monitoring.hpp"
#include "support.hpp"

using namespace signaling;
using signaling::testing::ladder_policy;

TEST(MessageOf, HandExamples) {
  EXPECT_EQ(message_of(StepMonitoringPolicy::uninformative(), 7.3), 0);
  StepMonitoringPolicy p({0.5}, {10, 20});
  EXPECT_EQ(message_of(p, 0.5), 20);
  EXPECT_EQ(message_of(p, 0.49), 10);
}

TEST(MinEffort, HandExamples) {
  EXPECT_EQ(min_effort(StepMonitoringPolicy::cutoff(0.5), 1), 0.5);
  EXPECT_EQ(min_effort(ladder_policy({0.2, 0.9}), 0), 0.0);
  EXPECT_EQ(min_effort(ladder_policy({0.2, 0.9}), 2), 0.9);
  EXPECT_THROW(min_effort(ladder_policy({0.2}), 5), InputError);
}

TEST(MinCost, HandExamples) {
  CostFamily cf = CostFamily::linear(2.0, 1.0);
  PolicyProfile profile{{0.3, StepMonitoringPolicy::cutoff(0.5)},
                        {0.0, StepMonitoringPolicy::uninformative()}};
  EXPECT_NEAR(min_cost(profile, cf, Type::kLow, {0, 1}), 1.3, 1e-12);
  EXPECT_NEAR(min_cost(profile, cf, Type::kHigh, {0, 1}), 0.8, 1e-12);
  EXPECT_EQ(min_cost(profile, cf, Type::kLow, {1, 0}), 0.0);
  EXPECT_EQ(min_cost(profile, cf, Type::kHigh, {1, 0}), 0.0);
  EXPECT_THROW(min_cost(profile, cf, Type::kLow, {2, 0}), InputError);
  EXPECT_THROW(min_cost(profile, cf, Type::kLow, {1, 1}), InputError);
}

TEST(Policy, ConstructorRejectsMalformed) {
  EXPECT_THROW(StepMonitoringPolicy({0.5}, {0}), InputError);
  EXPECT_THROW(StepMonitoringPolicy({0.5, 0.5}, {0, 1, 2}), InputError);
  EXPECT_THROW(StepMonitoringPolicy({0.0}, {0, 1}), InputError);
  EXPECT_THROW(StepMonitoringPolicy({0.5}, {1, 1}), InputError);
}

TEST(ReduceMinimal, HandExamples) {
  StepMonitoringPolicy p = ladder_policy({0.5, 1.0});
  StepMonitoringPolicy r = reduce_minimal(p, {0, 2});
  EXPECT_EQ(r.thresholds(), std::vector<double>({1.0}));
  EXPECT_EQ(r.messages(), std::vector<MessageId>({0, 2}));
  EXPECT_EQ(reduce_minimal(p, {0, 1, 2}), p);
  EXPECT_EQ(reduce_minimal(StepMonitoringPolicy{}, {0}), StepMonitoringPolicy{});
  EXPECT_THROW(reduce_minimal(p, {}), InputError);
}

TEST(Signal, StringRoundTrip) {
  Signal s{3, 12};
  EXPECT_EQ(to_string(s), "3:12");
  EXPECT_EQ(signal_from_string("3:12"), s);
  EXPECT_THROW(signal_from_string("3-12"), InputError);
  EXPECT_THROW(signal_from_string(":1"), InputError);
}

TEST(PerfectlyInformative, OneMessagePerGridCell) {
  StepMonitoringPolicy p = perfectly_informative({0.0, 0.5, 1.0, 1.5});
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(message_of(p, 0.7), message_of(p, 0.5));
  EXPECT_NE(message_of(p, 0.5), message_of(p, 1.0));
}

class MonitoringProperties : public ::testing::Test {
 protected:
  std::mt19937 rng{3};

  StepMonitoringPolicy random_policy() {
    std::uniform_int_distribution<int> count(0, 5);
    std::uniform_real_distribution<double> t(0.01, 5.0);
    std::vector<double> thresholds;
    int c = count(rng);
    while (static_cast<int>(thresholds.size()) < c) {
      double x = t(rng);
      if (std::find(thresholds.begin(), thresholds.end(), x) == thresholds.end()) {
        thresholds.push_back(x);
      }
    }
    std::sort(thresholds.begin(), thresholds.end());
    std::vector<MessageId> messages;
    for (std::size_t k = 0; k <= thresholds.size(); ++k) {
      messages.push_back(static_cast<MessageId>(7 * k + 3));
    }
    return {thresholds, messages};
  }
};

TEST_F(MonitoringProperties, MinEffortBelowEffortWithEqualityAtThresholds) {
  std::uniform_real_distribution<double> e(0.0, 6.0);
  for (int k = 0; k < 200; ++k) {
    StepMonitoringPolicy p = random_policy();
    for (int j = 0; j < 20; ++j) {
      double x = e(rng);
      EXPECT_LE(min_effort(p, message_of(p, x)), x);
      bool is_threshold = std::find(p.thresholds().begin(), p.thresholds().end(), x) !=
                          p.thresholds().end();
      EXPECT_EQ(min_effort(p, message_of(p, x)) == x, is_threshold || x == 0.0);
    }
    for (double t : p.thresholds()) EXPECT_EQ(min_effort(p, message_of(p, t)), t);
    EXPECT_EQ(min_effort(p, message_of(p, 0.0)), 0.0);
  }
}

TEST_F(MonitoringProperties, RightContinuous) {
  for (int k = 0; k < 200; ++k) {
    StepMonitoringPolicy p = random_policy();
    for (double t : p.thresholds()) {
      for (double delta : {1e-3, 1e-6, 1e-9, 1e-12}) {
        if (std::upper_bound(p.thresholds().begin(), p.thresholds().end(), t) !=
                p.thresholds().end() &&
            *std::upper_bound(p.thresholds().begin(), p.thresholds().end(), t) <=
                t + delta) {
          continue;
        }
        EXPECT_EQ(message_of(p, t + delta), message_of(p, t));
      }
    }
  }
}

TEST_F(MonitoringProperties, ReduceMinimalPreservesSentAndImageSize) {
  std::uniform_real_distribution<double> e(0.0, 6.0);
  std::bernoulli_distribution keep(0.5);
  for (int k = 0; k < 300; ++k) {
    StepMonitoringPolicy p = random_policy();
    std::set<MessageId> sent;
    for (MessageId m : p.messages()) {
      if (keep(rng)) sent.insert(m);
    }
    if (sent.empty()) sent.insert(p.messages().front());
    StepMonitoringPolicy r = reduce_minimal(p, sent);
    EXPECT_EQ(r.size(), sent.size());
    std::set<MessageId> image(r.messages().begin(), r.messages().end());
    EXPECT_EQ(image, sent);
    for (int j = 0; j < 50; ++j) {
      double x = e(rng);
      if (sent.count(message_of(p, x))) EXPECT_EQ(message_of(r, x), message_of(p, x));
    }
    for (double t : p.thresholds()) {
      if (sent.count(message_of(p, t))) EXPECT_EQ(message_of(r, t), message_of(p, t));
    }
  }
}

TEST(Profile, Validation) {
  MarketParams p = signaling::testing::sorting(2);
  PolicyProfile one{{0.0, {}}};
  EXPECT_THROW(validate_profile(one, p), InputError);
  PolicyProfile neg{{-0.1, {}}, {0.0, {}}};
  EXPECT_THROW(validate_profile(neg, p), InputError);
  PolicyProfile ok{{0.0, StepMonitoringPolicy::cutoff(0.5)}, {0.0, {}}};
  EXPECT_NO_THROW(validate_profile(ok, p));
  EXPECT_EQ(all_signals(ok).size(), 3u);
  EXPECT_THROW(validate_signal(ok, {1, 1}), InputError);
}
