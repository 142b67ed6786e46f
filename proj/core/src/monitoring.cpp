#include "signaling/monitoring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "signaling/errors.hpp"

namespace signaling {

StepMonitoringPolicy::StepMonitoringPolicy() : messages_{0} {}

StepMonitoringPolicy::StepMonitoringPolicy(std::vector<double> thresholds,
                                           std::vector<MessageId> messages)
    : thresholds_(std::move(thresholds)), messages_(std::move(messages)) {
  if (messages_.size() != thresholds_.size() + 1) {
    throw InputError(
        "field 'messages': need exactly one more message than thresholds");
  }
  for (std::size_t k = 0; k < thresholds_.size(); ++k) {
    double t = thresholds_[k];
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw InputError("field 'thresholds': must be positive and finite");
    }
    if (k > 0 && !(t > thresholds_[k - 1])) {
      throw InputError("field 'thresholds': must be strictly ascending");
    }
  }
  std::vector<MessageId> sorted = messages_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("field 'messages': identifiers must be distinct");
  }
}

StepMonitoringPolicy StepMonitoringPolicy::uninformative(MessageId message) {
  return StepMonitoringPolicy({}, {message});
}

StepMonitoringPolicy StepMonitoringPolicy::cutoff(double threshold) {
  return StepMonitoringPolicy({threshold}, {0, 1});
}

bool StepMonitoringPolicy::has_message(MessageId m) const {
  return std::find(messages_.begin(), messages_.end(), m) != messages_.end();
}

std::size_t StepMonitoringPolicy::index_of(MessageId m) const {
  auto it = std::find(messages_.begin(), messages_.end(), m);
  if (it == messages_.end()) {
    throw InputError("unknown message " + std::to_string(m));
  }
  return static_cast<std::size_t>(it - messages_.begin());
}

std::string to_string(const Signal& s) {
  return std::to_string(s.school) + ":" + std::to_string(s.message);
}

Signal signal_from_string(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InputError("signal key '" + text + "': expected 'school:message'");
  }
  try {
    std::size_t used = 0;
    Signal s;
    s.school = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("school");
    std::string rest = text.substr(colon + 1);
    s.message = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("message");
    return s;
  } catch (const std::logic_error&) {
    throw InputError("signal key '" + text + "': expected 'school:message'");
  }
}

MessageId message_of(const StepMonitoringPolicy& policy, double effort) {
  if (!(effort >= 0.0)) throw DomainError("effort must be nonnegative");
  const auto& t = policy.thresholds();
  auto it = std::upper_bound(t.begin(), t.end(), effort);
  return policy.messages()[static_cast<std::size_t>(it - t.begin())];
}

double min_effort(const StepMonitoringPolicy& policy, MessageId m) {
  std::size_t j = policy.index_of(m);
  return j == 0 ? 0.0 : policy.thresholds()[j - 1];
}

void validate_signal(const PolicyProfile& profile, const Signal& s) {
  if (s.school < 0 || static_cast<std::size_t>(s.school) >= profile.size()) {
    throw InputError("signal " + to_string(s) + ": school out of range");
  }
  if (!profile[static_cast<std::size_t>(s.school)].monitoring.has_message(
          s.message)) {
    throw InputError("signal " + to_string(s) + ": unknown message");
  }
}

double min_cost(const PolicyProfile& profile, const CostFamily& cf, Type type,
                const Signal& s) {
  validate_signal(profile, s);
  const Policy& p = profile[static_cast<std::size_t>(s.school)];
  return cf(type, min_effort(p.monitoring, s.message)) + p.fee;
}

StepMonitoringPolicy perfectly_informative(const std::vector<double>& grid) {
  std::vector<double> thresholds;
  for (double g : grid) {
    if (g > 0.0 && (thresholds.empty() || g > thresholds.back())) {
      thresholds.push_back(g);
    } else if (g < 0.0 || (!thresholds.empty() && g < thresholds.back())) {
      throw InputError("grid: points must be ascending and nonnegative");
    }
  }
  std::vector<MessageId> messages(thresholds.size() + 1);
  for (std::size_t j = 0; j < messages.size(); ++j) {
    messages[j] = static_cast<MessageId>(j);
  }
  return StepMonitoringPolicy(std::move(thresholds), std::move(messages));
}

StepMonitoringPolicy reduce_minimal(const StepMonitoringPolicy& policy,
                                    const std::set<MessageId>& sent) {
  if (sent.empty()) throw InputError("sent message set is empty");
  for (MessageId m : sent) {
    if (!policy.has_message(m)) {
      throw InputError("sent message " + std::to_string(m) +
                       " is not emitted by the policy");
    }
  }
  const auto& msgs = policy.messages();
  const std::size_t bands = msgs.size();
  std::vector<MessageId> effective(bands);
  std::vector<bool> assigned(bands, false);
  std::optional<MessageId> left;
  for (std::size_t j = 0; j < bands; ++j) {
    if (sent.count(msgs[j])) left = msgs[j];
    if (left) {
      effective[j] = *left;
      assigned[j] = true;
    }
  }
  std::optional<MessageId> right;
  for (std::size_t j = bands; j-- > 0;) {
    if (sent.count(msgs[j])) right = msgs[j];
    if (!assigned[j]) effective[j] = *right;
  }
  std::vector<double> thresholds;
  std::vector<MessageId> messages{effective[0]};
  for (std::size_t j = 1; j < bands; ++j) {
    if (effective[j] != messages.back()) {
      thresholds.push_back(policy.thresholds()[j - 1]);
      messages.push_back(effective[j]);
    }
  }
  return StepMonitoringPolicy(std::move(thresholds), std::move(messages));
}

std::vector<Signal> all_signals(const PolicyProfile& profile) {
  std::vector<Signal> out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    for (MessageId m : profile[i].monitoring.messages()) {
      out.push_back({static_cast<int>(i), m});
    }
  }
  return out;
}

void validate_profile(const PolicyProfile& profile,
                      const MarketParams& params) {
  if (profile.empty()) throw InputError("profile: no policies");
  if (static_cast<int>(profile.size()) != params.n_schools) {
    throw InputError("profile: length " + std::to_string(profile.size()) +
                     " does not match n_schools " +
                     std::to_string(params.n_schools));
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    double fee = profile[i].fee;
    if (!(fee >= 0.0) || !std::isfinite(fee)) {
      throw InputError("profile[" + std::to_string(i) +
                       "].fee: must be nonnegative and finite");
    }
  }
}

}  // namespace signaling
