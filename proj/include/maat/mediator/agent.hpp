#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "maat/audit.hpp"
#include "maat/mediator/mediate.hpp"
#include "maat/ontology.hpp"
#include "maat/parser.hpp"
#include "maat/simnet/topology.hpp"

namespace maat {

// Logical time in simulation mode, wall-clock milliseconds in service mode.
class LogicalClock {
  public:
    std::uint64_t now() const { return now_; }
    void advance(std::uint64_t ticks) { now_ += ticks; }
    void set(std::uint64_t t) { now_ = std::max(now_, t); }

  private:
    std::uint64_t now_ = 0;
};

// Shared simulated network state. Mutated only between mediations or via
// advertize, under the single-writer contract.
struct SimState {
    simnet::Topology topology;
    simnet::MulticastAllocator multicast;
};

struct AgentConfig {
    std::string agent_id = "maat-0";
    int scope_level = 0;
    std::string scope_subnet;     // restrict visibility to this subnet subtree
    std::string parent_endpoint;  // empty at the top of the hierarchy
    std::uint64_t mediation_timeout = 2000;
    int max_escalations = 3;
    std::vector<PolicyRule> policies;
    double w_soft = 1.0;
    std::string audit_path;
    std::string state_file;  // persistent topology (service mode)
    std::string ontology_file;
};

AgentConfig agent_config_from_json(const nlohmann::json& doc);

enum class SessionState { Created, Mediating, Reified, Failed, Escalated, Closed };

const char* session_state_name(SessionState s);

struct Session {
    std::string session_id;
    std::string intent_text;
    std::string canonical_intent;
    std::string plan_digest;
    SessionState state = SessionState::Created;
    MediationOutcome result;
    bool rejected = false;    // parse or validation failure
    std::string error;
    std::uint64_t created = 0;
    std::uint64_t closed = 0;
    int escalation_count = 0;
    std::vector<std::string> agent_chain;
};

struct SubmitResult {
    std::string session_id;
    MediationOutcome outcome;
    bool rejected = false;
    std::string error;
    int escalation_count = 0;
};

// A Maat agent: accepts intents, mediates them against the shared state,
// escalates failures toward its parent, and appends one audit record per
// submission.
class Agent {
  public:
    // Forwards an envelope to the parent agent and returns the reply.
    using ParentLink = std::function<nlohmann::json(const nlohmann::json&)>;

    Agent(AgentConfig config, std::shared_ptr<SimState> state,
          std::shared_ptr<LogicalClock> clock, OntologyRegistry ontology);

    void set_parent(ParentLink link) { parent_ = std::move(link); }

    const AgentConfig& config() const { return config_; }

    // parse -> validate -> compile -> mediate. Opens a session, closes it,
    // and emits exactly one audit record for every outcome. A failed
    // mediation is escalated to the parent when one is linked and the hop
    // budget allows.
    SubmitResult submit_intent(const std::string& source_text,
                               const std::string& requester_node, int hop_count = 0);

    // Widens scope for an already-failed session; returns the parent's
    // result verbatim, or a non-IDN fallback when no wider scope exists.
    SubmitResult escalate(const Session& session, const std::string& requester);

    // Inserts or refreshes a service instance on the origin node.
    nlohmann::json handle_advertize(const std::string& service,
                                    const nlohmann::json& attrs,
                                    const std::string& origin_node);

    // Wire protocol dispatch: SUBMIT_INTENT, ESCALATE, ADVERTIZE, PING,
    // LIST_SESSIONS. Malformed envelopes yield a structured ERROR reply.
    nlohmann::json handle_envelope(const nlohmann::json& envelope);
    nlohmann::json handle_line(const std::string& line);

    const std::vector<Session>& sessions() const { return sessions_; }
    const std::vector<audit::MediationLogRecord>& audit_records() const { return records_; }

    nlohmann::json sessions_to_json() const;
    void save_sessions(const std::string& path) const;

  private:
    Session& open_session(const std::string& text);
    void close_session(Session& session);
    void record_audit(const Session& session);
    SubmitResult forward_to_parent(const std::string& text, const std::string& requester,
                                   int hop_count);

    AgentConfig config_;
    std::shared_ptr<SimState> state_;
    std::shared_ptr<LogicalClock> clock_;
    OntologyRegistry ontology_;
    ParentLink parent_;
    std::vector<Session> sessions_;
    std::vector<audit::MediationLogRecord> records_;
    std::unique_ptr<audit::AuditLog> audit_log_;
    std::uint64_t next_session_ = 1;
    std::uint64_t next_msg_ = 1;
    mutable std::mutex mutex_;  // single-writer contract for sessions/log
};

}  // namespace maat
