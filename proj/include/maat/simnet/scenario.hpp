#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maat/mediator/agent.hpp"

namespace maat::simnet {

class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(int step, const std::string& what)
        : std::runtime_error("scenario step " + std::to_string(step) + ": " + what),
          step_index(step) {}
    int step_index;
};

struct ScenarioReport {
    nlohmann::json steps = nlohmann::json::array();
    std::string audit_path;
    std::vector<std::shared_ptr<Agent>> agents;  // kept alive for inspection
    std::shared_ptr<SimState> state;
    std::shared_ptr<LogicalClock> clock;

    nlohmann::json to_json() const;
};

// Boots the scenario's agents in-process, replays the intent script under a
// logical clock, and returns per-step results plus the audit file path.
// Deterministic given (topology, scenario, seed).
ScenarioReport run_scenario(const nlohmann::json& doc, const std::string& base_dir = ".",
                            const std::string& audit_path_override = "");

nlohmann::json load_json_file(const std::string& path);

}  // namespace maat::simnet
