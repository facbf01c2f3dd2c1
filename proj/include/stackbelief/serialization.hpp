#ifndef STACKBELIEF_SERIALIZATION_HPP
#define STACKBELIEF_SERIALIZATION_HPP

#include <string>

#include <json.hpp>

#include "stackbelief/harness.hpp"

namespace stackbelief {

// Plain config record {label, Q: row-major, R: row-major}; dimensions are
// recovered from the array lengths (both matrices are square).
nlohmann::ordered_json cost_model_to_json(const QuadCostModel& cost);
QuadCostModel cost_model_from_json(const nlohmann::json& j);

nlohmann::ordered_json scenario_params_to_json(const ScenarioParams& params);
ScenarioParams scenario_params_from_json(const nlohmann::json& j);

// Parses a scenario config file (JSON, // comments allowed). Missing keys
// keep their defaults; unknown keys raise with the key name.
ScenarioParams load_scenario_config(const std::string& path);

nlohmann::ordered_json run_summary_to_json(const RunSummary& record);

}  // namespace stackbelief

#endif  // STACKBELIEF_SERIALIZATION_HPP
