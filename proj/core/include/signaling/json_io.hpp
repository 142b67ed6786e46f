#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "signaling/audit.hpp"
#include "signaling/outer_game.hpp"
#include "signaling/refinement.hpp"

namespace signaling {

using Json = nlohmann::json;

// Parsers throw InputError naming the offending field.

Json to_json(const CostFamily& cost);
CostFamily cost_from_json(const Json& j);

Json to_json(const MarketParams& params);
MarketParams params_from_json(const Json& j);

Json to_json(const StepMonitoringPolicy& policy);
StepMonitoringPolicy monitoring_from_json(const Json& j);

Json to_json(const Policy& policy);
Policy policy_from_json(const Json& j);

Json to_json(const PolicyProfile& profile);
PolicyProfile profile_from_json(const Json& j);

Json to_json(const PopulationStrategy& strategy);
PopulationStrategy strategy_from_json(const Json& j);

Json to_json(const SubgameEquilibrium& eq);
SubgameEquilibrium equilibrium_from_json(const Json& j);

Json to_json(const VerificationReport& report);
VerificationReport report_from_json(const Json& j);

Json to_json(const EquilibriumOutcome& outcome);
EquilibriumOutcome outcome_from_json(const Json& j);

Json to_json(const WelfareReport& report);
WelfareReport welfare_from_json(const Json& j);

Json to_json(const FeeSet& set);
FeeSet fee_set_from_json(const Json& j);

Json to_json(const FierceVerdict& verdict);

Json to_json(const AuditReport& report);

// Reads and parses a JSON file; unreadable or malformed files are input errors.
Json read_json_file(const std::string& path);

// "%.12g", '.' decimal regardless of locale.
std::string format_number(double value);

}  // namespace signaling
