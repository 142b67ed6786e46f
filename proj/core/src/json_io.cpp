#include "signaling/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "signaling/errors.hpp"

namespace signaling {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw InputError("field '" + field + "': " + what);
}

const Json& member(const Json& j, const std::string& key) {
  if (!j.is_object()) field_error(key, "enclosing value is not an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(key, "missing");
  return *it;
}

double number(const Json& j, const std::string& key) {
  const Json& v = member(j, key);
  if (!v.is_number()) field_error(key, "expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) field_error(key, "not finite");
  return x;
}

int integer(const Json& j, const std::string& key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer()) field_error(key, "expected an integer");
  return v.get<int>();
}

std::string text(const Json& j, const std::string& key) {
  const Json& v = member(j, key);
  if (!v.is_string()) field_error(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& key) {
  const Json& v = member(j, key);
  if (!v.is_array()) field_error(key, "expected an array of numbers");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) field_error(key, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<double> numbers_or_empty(const Json& j, const std::string& key) {
  return j.contains(key) ? numbers(j, key) : std::vector<double>{};
}

Json type_pair(double low, double high) { return {{"L", low}, {"H", high}}; }

// Keeps parse errors pointing at the top-level field being read.
template <typename F>
auto nested(const std::string& field, F&& parse) {
  try {
    return parse();
  } catch (const InputError& e) {
    throw InputError("field '" + field + "' > " + e.what());
  }
}

}  // namespace

Json to_json(const CostFamily& cost) {
  Json j{{"kind", cost_kind_name(cost.kind())}};
  switch (cost.kind()) {
    case CostKind::kLinear:
      j["kappa_L"] = cost.kappa(Type::kLow);
      j["kappa_H"] = cost.kappa(Type::kHigh);
      break;
    case CostKind::kPower:
      j["kappa_L"] = cost.kappa(Type::kLow);
      j["kappa_H"] = cost.kappa(Type::kHigh);
      j["exponent"] = cost.exponent();
      break;
    case CostKind::kTabulated:
      j["knots"] = cost.knots();
      j["costs_L"] = cost.table(Type::kLow);
      j["costs_H"] = cost.table(Type::kHigh);
      break;
  }
  return j;
}

CostFamily cost_from_json(const Json& j) {
  std::string kind = text(j, "kind");
  if (kind == "linear") {
    return CostFamily::linear(number(j, "kappa_L"), number(j, "kappa_H"));
  }
  if (kind == "power") {
    return CostFamily::power(number(j, "kappa_L"), number(j, "kappa_H"),
                             number(j, "exponent"));
  }
  if (kind == "tabulated") {
    return CostFamily::tabulated(numbers(j, "knots"), numbers(j, "costs_L"),
                                 numbers(j, "costs_H"));
  }
  field_error("kind", "unknown cost kind '" + kind + "'");
}

Json to_json(const MarketParams& params) {
  Json j{{"theta_L", params.theta_l},
         {"theta_H", params.theta_h},
         {"lambda", params.lambda},
         {"n_schools", params.n_schools},
         {"credit_cap", nullptr},
         {"cost", to_json(params.cost)}};
  if (params.credit_cap) j["credit_cap"] = *params.credit_cap;
  return j;
}

MarketParams params_from_json(const Json& j) {
  MarketParams p;
  p.theta_l = number(j, "theta_L");
  p.theta_h = number(j, "theta_H");
  p.lambda = number(j, "lambda");
  p.n_schools = j.contains("n_schools") ? integer(j, "n_schools") : 1;
  if (j.contains("credit_cap") && !j.at("credit_cap").is_null()) {
    p.credit_cap = number(j, "credit_cap");
  }
  p.cost = nested("cost", [&] { return cost_from_json(member(j, "cost")); });
  p.validate();
  return p;
}

Json to_json(const StepMonitoringPolicy& policy) {
  return {{"thresholds", policy.thresholds()}, {"messages", policy.messages()}};
}

StepMonitoringPolicy monitoring_from_json(const Json& j) {
  std::vector<double> thresholds = numbers_or_empty(j, "thresholds");
  const Json& m = member(j, "messages");
  if (!m.is_array()) field_error("messages", "expected an array of integers");
  std::vector<MessageId> messages;
  for (const Json& x : m) {
    if (!x.is_number_integer()) {
      field_error("messages", "expected an array of integers");
    }
    messages.push_back(x.get<MessageId>());
  }
  return nested("monitoring", [&] {
    return StepMonitoringPolicy(std::move(thresholds), std::move(messages));
  });
}

Json to_json(const Policy& policy) {
  return {{"fee", policy.fee}, {"monitoring", to_json(policy.monitoring)}};
}

Policy policy_from_json(const Json& j) {
  Policy p;
  p.fee = number(j, "fee");
  if (p.fee < 0.0) field_error("fee", "must be nonnegative");
  p.monitoring = nested("monitoring", [&] {
    return monitoring_from_json(member(j, "monitoring"));
  });
  return p;
}

Json to_json(const PolicyProfile& profile) {
  Json j = Json::array();
  for (const Policy& p : profile) j.push_back(to_json(p));
  return j;
}

PolicyProfile profile_from_json(const Json& j) {
  if (!j.is_array()) field_error("profile", "expected an array of policies");
  PolicyProfile out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(nested("profile[" + std::to_string(i) + "]",
                         [&] { return policy_from_json(j[i]); }));
  }
  return out;
}

namespace {

Json actions_to_json(const std::vector<Action>& actions) {
  Json j = Json::array();
  for (const Action& a : actions) {
    j.push_back({{"school", a.school ? Json(*a.school) : Json(nullptr)},
                 {"effort", a.effort},
                 {"prob", a.prob}});
  }
  return j;
}

std::vector<Action> actions_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of actions");
  std::vector<Action> out;
  for (const Json& x : j) {
    Action a;
    const Json& s = member(x, "school");
    if (!s.is_null()) a.school = integer(x, "school");
    a.effort = number(x, "effort");
    a.prob = number(x, "prob");
    out.push_back(a);
  }
  return out;
}

Signal signal_key(const std::string& key, const std::string& field) {
  try {
    return signal_from_string(key);
  } catch (const Error&) {
    field_error(field, "bad signal key '" + key + "'");
  }
}

ConstructionTag tag_from_name(const std::string& name) {
  for (ConstructionTag t : {ConstructionTag::kSemiPooling, ConstructionTag::kSeparating}) {
    if (name == construction_tag_name(t)) return t;
  }
  field_error("construction_tag", "unknown tag '" + name + "'");
}

}  // namespace

Json to_json(const PopulationStrategy& strategy) {
  return {{"L", actions_to_json(strategy.low)},
          {"H", actions_to_json(strategy.high)}};
}

PopulationStrategy strategy_from_json(const Json& j) {
  PopulationStrategy st;
  st.low = actions_from_json(member(j, "L"), "strategy.L");
  st.high = actions_from_json(member(j, "H"), "strategy.H");
  return st;
}

Json to_json(const SubgameEquilibrium& eq) {
  Json wages = Json::object();
  for (const auto& [s, offer] : eq.wages) {
    wages[to_string(s)] = offer.hired ? Json(offer.wage) : Json(nullptr);
  }
  Json beliefs = Json::object();
  for (const auto& [s, mu] : eq.beliefs) beliefs[to_string(s)] = mu;
  return {{"profile", to_json(eq.profile)},
          {"strategy", to_json(eq.strategy)},
          {"wages", wages},
          {"beliefs", beliefs},
          {"payoffs", type_pair(eq.payoff_l, eq.payoff_h)},
          {"construction_tag", construction_tag_name(eq.tag)}};
}

SubgameEquilibrium equilibrium_from_json(const Json& j) {
  SubgameEquilibrium eq;
  eq.profile = profile_from_json(member(j, "profile"));
  eq.strategy = nested("strategy",
                       [&] { return strategy_from_json(member(j, "strategy")); });
  const Json& wages = member(j, "wages");
  if (!wages.is_object()) field_error("wages", "expected an object");
  for (const auto& [key, v] : wages.items()) {
    Signal s = signal_key(key, "wages");
    if (v.is_null()) {
      eq.wages[s] = Offer::none();
    } else if (v.is_number()) {
      eq.wages[s] = Offer::hire(v.get<double>());
    } else {
      field_error("wages", "entry '" + key + "' must be a number or null");
    }
  }
  const Json& beliefs = member(j, "beliefs");
  if (!beliefs.is_object()) field_error("beliefs", "expected an object");
  for (const auto& [key, v] : beliefs.items()) {
    if (!v.is_number()) field_error("beliefs", "entry '" + key + "' must be a number");
    eq.beliefs[signal_key(key, "beliefs")] = v.get<double>();
  }
  const Json& payoffs = member(j, "payoffs");
  eq.payoff_l = nested("payoffs", [&] { return number(payoffs, "L"); });
  eq.payoff_h = nested("payoffs", [&] { return number(payoffs, "H"); });
  eq.tag = tag_from_name(text(j, "construction_tag"));
  return eq;
}

Json to_json(const VerificationReport& report) {
  Json v = Json::array();
  for (const Violation& x : report.violations) {
    v.push_back({{"kind", violation_kind_name(x.kind)},
                 {"signal", x.signal ? Json(to_string(*x.signal)) : Json(nullptr)},
                 {"gap", x.gap}});
  }
  return {{"passed", report.passed()}, {"violations", v}};
}

VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  const Json& v = member(j, "violations");
  if (!v.is_array()) field_error("violations", "expected an array");
  for (const Json& x : v) {
    Violation viol;
    try {
      viol.kind = violation_kind_from_name(text(x, "kind"));
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      field_error("kind", e.what());
    }
    const Json& s = member(x, "signal");
    if (!s.is_null()) viol.signal = signal_key(text(x, "signal"), "signal");
    viol.gap = number(x, "gap");
    r.violations.push_back(viol);
  }
  if (j.contains("passed") && j.at("passed").is_boolean() &&
      j.at("passed").get<bool>() != r.passed()) {
    field_error("passed", "inconsistent with the violation list");
  }
  return r;
}

Json to_json(const EquilibriumOutcome& outcome) {
  return {{"label", outcome_label_name(outcome.label)},
          {"subgame", to_json(outcome.subgame)},
          {"profits", outcome.profits},
          {"enrollment", type_pair(outcome.enrollment_l, outcome.enrollment_h)},
          {"employment", type_pair(outcome.employment_l, outcome.employment_h)}};
}

EquilibriumOutcome outcome_from_json(const Json& j) {
  EquilibriumOutcome o;
  try {
    o.label = outcome_label_from_name(text(j, "label"));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    field_error("label", e.what());
  }
  o.subgame = nested("subgame", [&] { return equilibrium_from_json(member(j, "subgame")); });
  o.profits = numbers(j, "profits");
  const Json& en = member(j, "enrollment");
  const Json& em = member(j, "employment");
  nested("enrollment", [&] {
    o.enrollment_l = number(en, "L");
    o.enrollment_h = number(en, "H");
    return 0;
  });
  nested("employment", [&] {
    o.employment_l = number(em, "L");
    o.employment_h = number(em, "H");
    return 0;
  });
  return o;
}

Json to_json(const WelfareReport& r) {
  return {{"productivity_term", r.productivity_term},
          {"effort_waste", r.effort_waste},
          {"total", r.total},
          {"student_surplus", type_pair(r.student_surplus_l, r.student_surplus_h)},
          {"school_profit_total", r.school_profit_total},
          {"max_welfare", r.max_welfare}};
}

WelfareReport welfare_from_json(const Json& j) {
  WelfareReport r;
  r.productivity_term = number(j, "productivity_term");
  r.effort_waste = number(j, "effort_waste");
  r.total = number(j, "total");
  const Json& s = member(j, "student_surplus");
  nested("student_surplus", [&] {
    r.student_surplus_l = number(s, "L");
    r.student_surplus_h = number(s, "H");
    return 0;
  });
  r.school_profit_total = number(j, "school_profit_total");
  r.max_welfare = number(j, "max_welfare");
  return r;
}

Json to_json(const FeeSet& set) {
  Json j{{"zero_point", set.has_zero_point}, {"interval", nullptr}};
  if (set.has_interval) {
    j["interval"] = {{"lo", set.lo},
                     {"hi", set.hi},
                     {"lo_closed", set.lo_closed},
                     {"hi_closed", set.hi_closed}};
  }
  return j;
}

FeeSet fee_set_from_json(const Json& j) {
  FeeSet s;
  const Json& z = member(j, "zero_point");
  if (!z.is_boolean()) field_error("zero_point", "expected a boolean");
  s.has_zero_point = z.get<bool>();
  const Json& iv = member(j, "interval");
  if (!iv.is_null()) {
    s.has_interval = true;
    nested("interval", [&] {
      s.lo = number(iv, "lo");
      s.hi = number(iv, "hi");
      const Json& lc = member(iv, "lo_closed");
      const Json& hc = member(iv, "hi_closed");
      if (!lc.is_boolean()) field_error("lo_closed", "expected a boolean");
      if (!hc.is_boolean()) field_error("hi_closed", "expected a boolean");
      s.lo_closed = lc.get<bool>();
      s.hi_closed = hc.get<bool>();
      return 0;
    });
  }
  return s;
}

Json to_json(const FierceVerdict& verdict) {
  Json reasons = Json::array();
  for (FierceReason r : verdict.reasons) reasons.push_back(fierce_reason_name(r));
  return {{"fierce", verdict.fierce}, {"reasons", reasons}};
}

Json to_json(const AuditReport& report) {
  Json best = nullptr;
  if (report.best) {
    best = {{"school", report.best->school},
            {"kind", report.best->kind},
            {"policy", to_json(report.best->policy)}};
  }
  return {{"max_gain", report.max_gain},
          {"best", best},
          {"deviations_checked", report.deviations_checked},
          {"oracle_evaluated", report.oracle_evaluated},
          {"canonical_fallbacks", report.canonical_fallbacks},
          {"epsilon", report.epsilon},
          {"gamma", report.gamma}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string s(buf);
  for (char& c : s) {
    if (c == ',') c = '.';
  }
  return s;
}

}  // namespace signaling
