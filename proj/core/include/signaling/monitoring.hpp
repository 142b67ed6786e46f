#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "signaling/market.hpp"

namespace signaling {

// School-local message identifier.
using MessageId = int;

// Right-continuous step map from effort to messages: M(e) = messages[j] for
// e in [t_j, t_{j+1}), with t_0 = 0 implicit.
class StepMonitoringPolicy {
 public:
  // Uninformative policy emitting message 0.
  StepMonitoringPolicy();
  StepMonitoringPolicy(std::vector<double> thresholds,
                       std::vector<MessageId> messages);

  static StepMonitoringPolicy uninformative(MessageId message = 0);
  // Two messages: 0 below the cutoff, 1 at or above it.
  static StepMonitoringPolicy cutoff(double threshold);

  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<MessageId>& messages() const { return messages_; }
  std::size_t size() const { return messages_.size(); }

  bool has_message(MessageId m) const;
  std::size_t index_of(MessageId m) const;

  bool operator==(const StepMonitoringPolicy& other) const = default;

 private:
  std::vector<double> thresholds_;
  std::vector<MessageId> messages_;
};

struct Policy {
  double fee = 0.0;
  StepMonitoringPolicy monitoring;

  bool operator==(const Policy& other) const = default;
};

using PolicyProfile = std::vector<Policy>;

struct Signal {
  int school = 0;
  MessageId message = 0;

  auto operator<=>(const Signal& other) const = default;
};

// "school:message"
std::string to_string(const Signal& s);
Signal signal_from_string(const std::string& text);

MessageId message_of(const StepMonitoringPolicy& policy, double effort);
double min_effort(const StepMonitoringPolicy& policy, MessageId m);

// Minimum cost of sending s: c(type, min effort) + fee.
double min_cost(const PolicyProfile& profile, const CostFamily& cf, Type type,
                const Signal& s);

// One step per positive grid point, so distinct grid efforts map to distinct
// messages (message j for the j-th band).
StepMonitoringPolicy perfectly_informative(const std::vector<double>& grid);

// Default resolution for perfectly_informative grids relative to e^R.
inline constexpr double kInformativeGridFraction = 1e-3;

// Coarsest policy that agrees with `policy` on every effort whose message is in
// `sent` and whose image is exactly `sent`. Unsent bands merge into the left
// neighbor when it is sent, otherwise into the right.
StepMonitoringPolicy reduce_minimal(const StepMonitoringPolicy& policy,
                                    const std::set<MessageId>& sent);

// Every (school, message) pair of the profile, in school then band order.
std::vector<Signal> all_signals(const PolicyProfile& profile);

void validate_signal(const PolicyProfile& profile, const Signal& s);

// Checks the profile length against params and fees against [0, inf).
void validate_profile(const PolicyProfile& profile, const MarketParams& params);

}  // namespace signaling
