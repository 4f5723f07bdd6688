#include "maat/simnet/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "maat/mediator/wire.hpp"

namespace maat::simnet {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

nlohmann::json ScenarioReport::to_json() const {
    return json{{"steps", steps}, {"audit_log", audit_path}};
}

ScenarioReport run_scenario(const json& doc, const std::string& base_dir,
                            const std::string& audit_path_override) {
    ScenarioReport report;

    json topo_doc;
    if (doc.at("topology").is_string()) {
        std::filesystem::path p = doc["topology"].get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        topo_doc = load_json_file(p.string());
    } else {
        topo_doc = doc["topology"];
    }

    report.state = std::make_shared<SimState>();
    report.state->topology = load_topology(topo_doc);
    report.clock = std::make_shared<LogicalClock>();

    std::string audit_path = audit_path_override.empty()
                                 ? doc.value("audit_log", std::string("mediation.jsonl"))
                                 : audit_path_override;
    if (std::filesystem::path(audit_path).is_relative() && audit_path_override.empty()) {
        audit_path = (std::filesystem::path(base_dir) / audit_path).string();
    }
    std::remove(audit_path.c_str());  // fresh log per run, for replay determinism
    report.audit_path = audit_path;

    OntologyRegistry base_ontology = builtin_ontology();
    if (doc.contains("ontology")) {
        base_ontology = OntologyRegistry::from_json(doc["ontology"]);
    }

    for (const auto& ja : doc.value("agents", json::array())) {
        AgentConfig cfg = agent_config_from_json(ja);
        cfg.audit_path = audit_path;
        report.agents.push_back(std::make_shared<Agent>(cfg, report.state, report.clock,
                                                        base_ontology));
    }
    if (report.agents.empty()) {
        report.agents.push_back(std::make_shared<Agent>(AgentConfig{.audit_path = audit_path},
                                                        report.state, report.clock,
                                                        base_ontology));
    }

    // parent_endpoint names another scenario agent; wire them in-process.
    auto find_agent = [&report](const std::string& id) -> std::shared_ptr<Agent> {
        for (const auto& a : report.agents) {
            if (a->config().agent_id == id) return a;
        }
        return nullptr;
    };
    for (const auto& agent : report.agents) {
        const std::string& pid = agent->config().parent_endpoint;
        if (pid.empty()) continue;
        if (auto parent = find_agent(pid)) {
            std::weak_ptr<Agent> weak = parent;
            agent->set_parent([weak](const json& env) {
                auto p = weak.lock();
                if (!p) throw std::runtime_error("parent agent gone");
                return p->handle_envelope(env);
            });
        }
    }

    // The "broadcast address" of a subnet is its scope-0 agent.
    auto local_agent = [&report](const std::string& subnet) -> std::shared_ptr<Agent> {
        for (const auto& a : report.agents) {
            if (a->config().scope_level != 0) continue;
            if (a->config().scope_subnet.empty() || a->config().scope_subnet == subnet) {
                return a;
            }
        }
        return report.agents.front();
    };

    std::vector<json> script;
    for (const auto& step : doc.value("script", json::array())) script.push_back(step);
    std::stable_sort(script.begin(), script.end(), [](const json& a, const json& b) {
        return a.value("at", 0) < b.value("at", 0);
    });

    for (std::size_t i = 0; i < script.size(); ++i) {
        const json& step = script[i];
        try {
            std::uint64_t at = step.value("at", 0);
            report.clock->set(at);
            const std::string from = step.at("from").get<std::string>();
            const Node* node = report.state->topology.find_node(from);
            if (!node) throw std::runtime_error("unknown requester node " + from);

            if (step.contains("advertize")) {
                auto agent = local_agent(node->subnet_id);
                json ack = agent->handle_advertize(step["advertize"].get<std::string>(),
                                                   step.value("attrs", json::object()), from);
                report.steps.push_back({{"at", at}, {"from", from}, {"ack", ack}});
                continue;
            }

            const std::string intent = step.at("intent").get<std::string>();
            auto agent = local_agent(node->subnet_id);
            SubmitResult r = agent->submit_intent(intent, from);
            json jr = {{"at", at},
                       {"from", from},
                       {"agent", agent->config().agent_id},
                       {"session_id", r.session_id},
                       {"escalation_count", r.escalation_count},
                       {"outcome", outcome_to_json(r.outcome)}};
            if (r.rejected) {
                jr["rejected"] = true;
                jr["error"] = r.error;
            }
            report.steps.push_back(std::move(jr));
        } catch (const ScenarioError&) {
            throw;
        } catch (const std::exception& e) {
            throw ScenarioError(static_cast<int>(i), e.what());
        }
    }
    return report;
}

}  // namespace maat::simnet
