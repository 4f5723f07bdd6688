// maat - intent DSL and mediation toolkit command line.
//
// Exit codes: 0 success, 2 language error, 3 IO error, 4 network error,
// 5 scenario error.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "maat/ast_json.hpp"
#include "maat/audit.hpp"
#include "maat/mediator/wire.hpp"
#include "maat/ontology.hpp"
#include "maat/parser.hpp"
#include "maat/plan.hpp"
#include "maat/simnet/scenario.hpp"

namespace {

constexpr int kExitLanguage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNetwork = 4;
constexpr int kExitScenario = 5;

std::string read_input(const std::string& path) {
    if (path == "-" || path.empty()) {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

maat::OntologyRegistry load_ontology(const std::string& flag) {
    std::string path = flag;
    if (path.empty()) {
        if (const char* env = std::getenv("MAAT_ONTOLOGY")) path = env;
    }
    if (path.empty()) return maat::builtin_ontology();
    return maat::OntologyRegistry::from_json(maat::simnet::load_json_file(path));
}

void print_diagnostics(const std::vector<maat::ParseDiagnostic>& diags,
                       const std::string& file) {
    for (const auto& d : diags) {
        std::cerr << file << ":" << d.line << ":" << d.column << ": error: " << d.message
                  << "\n";
    }
}

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop = true; }

int cmd_parse(const std::string& file, bool as_json) {
    std::string source;
    try {
        source = read_input(file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    maat::ParseResult result = maat::parse(source);
    if (!result.ok()) {
        print_diagnostics(result.diagnostics(), file.empty() ? "<stdin>" : file);
        return kExitLanguage;
    }
    if (as_json) {
        std::cout << maat::ast_to_json(result.intent()).dump(2) << "\n";
    } else {
        std::cout << maat::render(result.intent()) << "\n";
    }
    return 0;
}

int cmd_compile(const std::string& file, const std::string& ontology_flag) {
    std::string source;
    try {
        source = read_input(file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    maat::ParseResult result = maat::parse(source);
    if (!result.ok()) {
        print_diagnostics(result.diagnostics(), file.empty() ? "<stdin>" : file);
        return kExitLanguage;
    }
    maat::OntologyRegistry reg;
    try {
        reg = load_ontology(ontology_flag);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    auto errors = maat::validate_intent(result.intent(), reg);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "error: " << e.message << "\n";
        return kExitLanguage;
    }
    maat::ReificationPlan plan = maat::compile(result.intent(), reg);
    std::cout << maat::plan_to_json(plan).dump(2) << "\n";
    return 0;
}

int cmd_agent_run(const std::string& config_path, int port_flag) {
    nlohmann::json cfg_doc;
    try {
        cfg_doc = maat::simnet::load_json_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    maat::AgentConfig cfg = maat::agent_config_from_json(cfg_doc);
    auto state = std::make_shared<maat::SimState>();
    try {
        if (!cfg.state_file.empty()) {
            state->topology =
                maat::simnet::load_topology(maat::simnet::load_json_file(cfg.state_file));
        } else if (cfg_doc.contains("topology")) {
            state->topology = maat::simnet::load_topology(cfg_doc["topology"]);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    maat::OntologyRegistry reg;
    try {
        reg = load_ontology(cfg.ontology_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    auto clock = std::make_shared<maat::LogicalClock>();
    maat::Agent agent(cfg, state, clock, reg);
    if (!cfg.parent_endpoint.empty()) {
        auto [host, pport] = maat::wire::parse_endpoint(cfg.parent_endpoint);
        agent.set_parent([host, pport](const nlohmann::json& env) {
            return maat::wire::tcp_request(host, pport, env);
        });
    }
    int port = port_flag > 0 ? port_flag : cfg_doc.value("listen_port", 7470);
    maat::wire::TcpServer server(agent, port);
    try {
        server.start();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNetwork;
    }
    std::cerr << "agent " << cfg.agent_id << " listening on 127.0.0.1:" << server.port()
              << "\n";
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) {
        struct timespec ts {0, 100 * 1000 * 1000};
        nanosleep(&ts, nullptr);
    }
    server.stop();
    std::string store = cfg_doc.value("session_store", std::string());
    if (!store.empty()) agent.save_sessions(store);
    return 0;
}

int cmd_submit(const std::string& endpoint, const std::string& file,
               const std::string& requester) {
    std::string source;
    try {
        source = read_input(file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    try {
        auto [host, port] = maat::wire::parse_endpoint(endpoint);
        nlohmann::json envelope = {{"type", "SUBMIT_INTENT"},
                                   {"msg_id", "cli-1"},
                                   {"body",
                                    {{"intent", source}, {"requester", requester}}}};
        nlohmann::json reply = maat::wire::tcp_request(host, port, envelope);
        std::cout << reply.dump(2) << "\n";
        return reply.value("type", "") == "RESULT" ? 0 : kExitLanguage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNetwork;
    }
}

int cmd_scenario_run(const std::string& file, bool as_json) {
    try {
        nlohmann::json doc = maat::simnet::load_json_file(file);
        std::string base = std::filesystem::path(file).parent_path().string();
        if (base.empty()) base = ".";
        maat::simnet::ScenarioReport report = maat::simnet::run_scenario(doc, base);
        if (as_json) {
            std::cout << report.to_json().dump(2) << "\n";
        } else {
            for (const auto& step : report.steps) {
                std::cout << "t=" << step.value("at", 0) << " " << step.value("from", "")
                          << ": ";
                if (step.contains("ack")) {
                    std::cout << "advertize ack\n";
                } else {
                    std::cout << step["outcome"].value("kind", "?") << "\n";
                }
            }
            std::cout << "audit log: " << report.audit_path << "\n";
        }
        return 0;
    } catch (const maat::simnet::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScenario;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

int cmd_audit_score(const std::string& file, bool as_json) {
    std::vector<maat::audit::MediationLogRecord> records;
    try {
        records = maat::audit::read_log(file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    auto by_agent = maat::audit::score_by_agent(records);
    if (as_json) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [agent, score] : by_agent) {
            out[agent] = {{"mean", score.mean},
                          {"count", score.count},
                          {"failure_fraction", score.failure_fraction}};
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "agent                mean    count  failures\n";
        for (const auto& [agent, score] : by_agent) {
            std::printf("%-20s %-7.4g %-6zu %.4g\n", agent.c_str(), score.mean, score.count,
                        score.failure_fraction);
        }
    }
    return 0;
}

int cmd_sessions_list(const std::string& endpoint) {
    try {
        auto [host, port] = maat::wire::parse_endpoint(endpoint);
        nlohmann::json reply = maat::wire::tcp_request(
            host, port,
            {{"type", "LIST_SESSIONS"}, {"msg_id", "cli-1"}, {"body", nlohmann::json::object()}});
        std::cout << reply.value("body", nlohmann::json::object())
                         .value("sessions", nlohmann::json::array())
                         .dump(2)
                  << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNetwork;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maat: intent formulation, compilation, and mediation toolkit"};
    app.require_subcommand(1);

    std::string file;
    std::string ontology_flag;
    std::string endpoint;
    std::string requester = "localhost";
    std::string config_path;
    bool as_json = false;
    int port_flag = 0;

    auto* parse_cmd = app.add_subcommand("parse", "parse an intent and print it");
    parse_cmd->add_option("file", file, "intent file, or - for stdin");
    parse_cmd->add_flag("--json", as_json, "print the AST as canonical JSON");

    auto* compile_cmd = app.add_subcommand("compile", "compile an intent to a plan");
    compile_cmd->add_option("file", file, "intent file, or - for stdin");
    compile_cmd->add_option("--ontology", ontology_flag,
                            "ontology JSON (default $MAAT_ONTOLOGY)");
    compile_cmd->add_flag("--json", as_json, "plan output is always JSON");

    auto* agent_cmd = app.add_subcommand("agent", "agent operations");
    auto* agent_run = agent_cmd->add_subcommand("run", "serve the wire protocol");
    agent_run->add_option("--config", config_path, "agent config JSON")->required();
    agent_run->add_option("--port", port_flag, "listen port override");

    auto* submit_cmd = app.add_subcommand("submit", "submit an intent to a running agent");
    submit_cmd->add_option("--agent", endpoint, "agent endpoint host:port")->required();
    submit_cmd->add_option("--requester", requester, "requester node id");
    submit_cmd->add_option("file", file, "intent file, or - for stdin");

    auto* scenario_cmd = app.add_subcommand("scenario", "scenario operations");
    auto* scenario_run = scenario_cmd->add_subcommand("run", "run a scenario script");
    scenario_run->add_option("file", file, "scenario JSON")->required();
    scenario_run->add_flag("--json", as_json, "print the full report as JSON");

    auto* audit_cmd = app.add_subcommand("audit", "audit log operations");
    auto* audit_score = audit_cmd->add_subcommand("score", "score a mediation log");
    audit_score->add_option("file", file, "JSONL audit log")->required();
    audit_score->add_flag("--json", as_json, "print aggregates as JSON");

    auto* sessions_cmd = app.add_subcommand("sessions", "session operations");
    auto* sessions_list = sessions_cmd->add_subcommand("list", "list sessions of an agent");
    sessions_list->add_option("--agent", endpoint, "agent endpoint host:port")->required();

    CLI11_PARSE(app, argc, argv);

    if (parse_cmd->parsed()) return cmd_parse(file, as_json);
    if (compile_cmd->parsed()) return cmd_compile(file, ontology_flag);
    if (agent_cmd->parsed() && agent_run->parsed()) return cmd_agent_run(config_path, port_flag);
    if (submit_cmd->parsed()) return cmd_submit(endpoint, file, requester);
    if (scenario_cmd->parsed() && scenario_run->parsed()) return cmd_scenario_run(file, as_json);
    if (audit_cmd->parsed() && audit_score->parsed()) return cmd_audit_score(file, as_json);
    if (sessions_cmd->parsed() && sessions_list->parsed()) return cmd_sessions_list(endpoint);
    return 0;
}
