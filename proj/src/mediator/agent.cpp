#include "maat/mediator/agent.hpp"

#include <fstream>

namespace maat {

using nlohmann::json;

const char* session_state_name(SessionState s) {
    switch (s) {
        case SessionState::Created: return "created";
        case SessionState::Mediating: return "mediating";
        case SessionState::Reified: return "reified";
        case SessionState::Failed: return "failed";
        case SessionState::Escalated: return "escalated";
        case SessionState::Closed: return "closed";
    }
    return "created";
}

AgentConfig agent_config_from_json(const json& doc) {
    AgentConfig cfg;
    cfg.agent_id = doc.value("agent_id", cfg.agent_id);
    cfg.scope_level = doc.value("scope_level", 0);
    cfg.scope_subnet = doc.value("scope_subnet", std::string());
    cfg.parent_endpoint = doc.value("parent_endpoint", std::string());
    cfg.mediation_timeout = doc.value("mediation_timeout", cfg.mediation_timeout);
    cfg.max_escalations = doc.value("max_escalations", cfg.max_escalations);
    cfg.w_soft = doc.value("w_soft", 1.0);
    cfg.audit_path = doc.value("audit_path", std::string());
    cfg.state_file = doc.value("state_file", std::string());
    cfg.ontology_file = doc.value("ontology_file", std::string());
    if (doc.contains("policies")) cfg.policies = policies_from_json(doc["policies"]);
    return cfg;
}

Agent::Agent(AgentConfig config, std::shared_ptr<SimState> state,
             std::shared_ptr<LogicalClock> clock, OntologyRegistry ontology)
    : config_(std::move(config)),
      state_(std::move(state)),
      clock_(std::move(clock)),
      ontology_(std::move(ontology)) {
    if (!config_.audit_path.empty()) {
        audit_log_ = std::make_unique<audit::AuditLog>(config_.audit_path);
    }
}

Session& Agent::open_session(const std::string& text) {
    Session s;
    s.session_id = config_.agent_id + "-s" + std::to_string(next_session_++);
    s.intent_text = text;
    s.created = clock_->now();
    s.agent_chain.push_back(config_.agent_id);
    sessions_.push_back(std::move(s));
    return sessions_.back();
}

void Agent::close_session(Session& session) {
    session.closed = clock_->now();
    session.state = SessionState::Closed;
}

void Agent::record_audit(const Session& session) {
    audit::MediationLogRecord record;
    record.session_id = session.session_id;
    record.agent_id = config_.agent_id;
    record.logical_timestamp = session.closed;
    record.intent = session.canonical_intent.empty() ? session.intent_text
                                                     : session.canonical_intent;
    record.plan_digest = session.plan_digest;
    record.outcome = session.result.kind;
    record.rejected = session.rejected;
    record.bindings = outcome_to_json(session.result)["bindings"];
    record.hard_total = session.result.hard_total;
    record.hard_satisfied = session.result.hard_satisfied;
    record.soft_total = session.result.soft_total;
    record.soft_satisfied = session.result.soft_satisfied;
    record.escalation_count = session.escalation_count;
    records_.push_back(record);
    if (audit_log_) audit_log_->append(record);
}

SubmitResult Agent::forward_to_parent(const std::string& text, const std::string& requester,
                                      int hop_count) {
    json envelope = {{"type", "ESCALATE"},
                     {"msg_id", config_.agent_id + "-m" + std::to_string(next_msg_++)},
                     {"body",
                      {{"intent", text},
                       {"requester", requester},
                       {"hop_count", hop_count}}}};
    json reply = parent_(envelope);
    if (reply.value("type", "") != "RESULT") {
        throw std::runtime_error("unexpected parent reply");
    }
    const json& body = reply.at("body");
    SubmitResult result;
    result.session_id = body.value("session_id", "");
    result.rejected = body.value("rejected", false);
    result.error = body.value("error", "");
    result.escalation_count = body.value("escalation_count", 0);
    const json& outcome = body.at("outcome");
    const std::string kind = outcome.value("kind", "failed");
    if (kind == "reified") result.outcome.kind = OutcomeKind::Reified;
    else if (kind == "non_idn_fallback") result.outcome.kind = OutcomeKind::NonIdnFallback;
    else result.outcome.kind = OutcomeKind::Failed;
    result.outcome.hard_total = outcome.value("hard_total", 0);
    result.outcome.hard_satisfied = outcome.value("hard_satisfied", 0);
    result.outcome.soft_total = outcome.value("soft_total", 0);
    result.outcome.soft_satisfied = outcome.value("soft_satisfied", 0);
    result.outcome.reason = outcome.value("reason", "");
    return result;
}

SubmitResult Agent::submit_intent(const std::string& source_text,
                                  const std::string& requester_node, int hop_count) {
    std::scoped_lock lock(mutex_);
    Session& session = open_session(source_text);
    session.state = SessionState::Mediating;
    clock_->advance(1);  // one mediation attempt costs one tick

    SubmitResult result;
    result.session_id = session.session_id;

    ParseResult parsed = parse(source_text);
    if (!parsed.ok()) {
        session.rejected = true;
        session.error = parsed.diagnostics().front().message;
        session.state = SessionState::Failed;
        result.rejected = true;
        result.error = session.error;
        close_session(session);
        record_audit(session);
        return result;
    }
    const IntentExpr& intent = parsed.intent();
    session.canonical_intent = render(intent);

    auto errors = validate_intent(intent, ontology_);
    if (!errors.empty()) {
        session.rejected = true;
        session.error = errors.front().message;
        session.state = SessionState::Failed;
        result.rejected = true;
        result.error = session.error;
        close_session(session);
        record_audit(session);
        return result;
    }

    ReificationPlan plan = compile(intent, ontology_);
    session.plan_digest = plan_digest(plan);

    MediateOptions opts;
    opts.w_soft = config_.w_soft;
    opts.scope_subnet = config_.scope_subnet;
    session.result = mediate(plan, state_->topology, config_.policies, requester_node,
                             &state_->multicast, opts);

    if (session.result.kind == OutcomeKind::Failed && parent_ &&
        hop_count < config_.max_escalations) {
        try {
            SubmitResult parent_result =
                forward_to_parent(source_text, requester_node, hop_count + 1);
            session.escalation_count = 1 + parent_result.escalation_count;
            session.state = SessionState::Escalated;
            session.result = parent_result.outcome;
            result = parent_result;
            result.session_id = session.session_id;
            result.escalation_count = session.escalation_count;
        } catch (const std::exception& e) {
            session.escalation_count += 1;
            session.result.kind = OutcomeKind::NonIdnFallback;
            session.result.reason = std::string("parent unreachable: ") + e.what();
            session.state = SessionState::Failed;
            result.outcome = session.result;
            result.escalation_count = session.escalation_count;
        }
        close_session(session);
        record_audit(session);
        return result;
    }

    session.state = session.result.kind == OutcomeKind::Reified ? SessionState::Reified
                                                                : SessionState::Failed;
    result.outcome = session.result;
    result.escalation_count = session.escalation_count;
    close_session(session);
    record_audit(session);
    return result;
}

SubmitResult Agent::escalate(const Session& session, const std::string& requester) {
    std::scoped_lock lock(mutex_);
    SubmitResult result;
    result.session_id = session.session_id;
    if (session.escalation_count >= config_.max_escalations) {
        result.outcome.kind = OutcomeKind::NonIdnFallback;
        result.outcome.reason = "escalation budget exhausted";
        return result;
    }
    if (!parent_) {
        result.outcome.kind = OutcomeKind::NonIdnFallback;
        result.outcome.reason = "no wider scope";
        return result;
    }
    try {
        result = forward_to_parent(session.intent_text, requester,
                                   session.escalation_count + 1);
        result.session_id = session.session_id;
        result.escalation_count += 1;
    } catch (const std::exception& e) {
        result.outcome.kind = OutcomeKind::NonIdnFallback;
        result.outcome.reason = std::string("parent unreachable: ") + e.what();
    }
    return result;
}

json Agent::handle_advertize(const std::string& service, const json& attrs,
                             const std::string& origin_node) {
    std::scoped_lock lock(mutex_);
    simnet::Node* node = state_->topology.find_node(origin_node);
    if (!node) {
        return json{{"status", "error"}, {"error", "unknown origin node " + origin_node}};
    }
    simnet::AttrMap parsed = attrs.is_object() ? simnet::attrs_from_json(attrs)
                                               : simnet::AttrMap{};
    if (simnet::ServiceInstance* existing = node->find_service(service)) {
        existing->attrs = std::move(parsed);  // refresh, no duplicate
    } else {
        node->services.push_back({service, std::move(parsed)});
    }
    if (!config_.state_file.empty()) {
        std::ofstream out(config_.state_file);
        out << simnet::topology_to_json(state_->topology).dump(2) << '\n';
    }
    return json{{"status", "ok"}, {"service", service}, {"node", origin_node}};
}

json Agent::handle_envelope(const json& envelope) {
    // msg_id is echoed verbatim whatever its type
    json msg_id;
    if (envelope.is_object() && envelope.contains("msg_id")) msg_id = envelope["msg_id"];
    auto error = [&msg_id](const std::string& message) {
        return json{{"type", "ERROR"}, {"msg_id", msg_id}, {"body", {{"message", message}}}};
    };
    if (!envelope.is_object() || !envelope.contains("type") ||
        !envelope["type"].is_string()) {
        return error("envelope must be an object with a string 'type'");
    }
    const std::string type = envelope["type"].get<std::string>();
    const json body = envelope.value("body", json::object());

    if (type == "PING") {
        return json{{"type", "PONG"}, {"msg_id", msg_id}, {"body", json::object()}};
    }
    if (type == "SUBMIT_INTENT" || type == "ESCALATE") {
        if (!body.is_object() || !body.contains("intent") || !body["intent"].is_string()) {
            return error("missing intent");
        }
        if (!body.contains("requester") || !body["requester"].is_string()) {
            return error("missing requester");
        }
        int hops = type == "ESCALATE" ? body.value("hop_count", 1) : 0;
        SubmitResult r = submit_intent(body["intent"].get<std::string>(),
                                       body["requester"].get<std::string>(), hops);
        json outcome = outcome_to_json(r.outcome);
        json reply_body = {{"session_id", r.session_id},
                           {"outcome", std::move(outcome)},
                           {"escalation_count", r.escalation_count}};
        if (r.rejected) {
            reply_body["rejected"] = true;
            reply_body["error"] = r.error;
        }
        return json{{"type", "RESULT"}, {"msg_id", msg_id}, {"body", std::move(reply_body)}};
    }
    if (type == "ADVERTIZE") {
        if (!body.contains("service") || !body["service"].is_string()) {
            return error("missing service");
        }
        json ack = handle_advertize(body["service"].get<std::string>(),
                                    body.value("attrs", json::object()),
                                    body.value("origin", std::string()));
        return json{{"type", "RESULT"}, {"msg_id", msg_id}, {"body", std::move(ack)}};
    }
    if (type == "LIST_SESSIONS") {
        return json{{"type", "RESULT"},
                    {"msg_id", msg_id},
                    {"body", {{"sessions", sessions_to_json()}}}};
    }
    return error("unknown envelope type '" + type + "'");
}

json Agent::handle_line(const std::string& line) {
    json envelope = json::parse(line, nullptr, false);
    if (envelope.is_discarded()) {
        return json{{"type", "ERROR"},
                    {"msg_id", ""},
                    {"body", {{"message", "malformed JSON envelope"}}}};
    }
    return handle_envelope(envelope);
}

json Agent::sessions_to_json() const {
    json arr = json::array();
    for (const auto& s : sessions_) {
        arr.push_back({{"session_id", s.session_id},
                       {"intent", s.canonical_intent.empty() ? s.intent_text
                                                             : s.canonical_intent},
                       {"state", session_state_name(s.state)},
                       {"outcome", s.rejected ? "rejected" : outcome_kind_name(s.result.kind)},
                       {"created", s.created},
                       {"closed", s.closed},
                       {"escalation_count", s.escalation_count},
                       {"agents", s.agent_chain}});
    }
    return arr;
}

void Agent::save_sessions(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write session store " + path);
    out << json{{"agent_id", config_.agent_id}, {"sessions", sessions_to_json()}}.dump(2)
        << '\n';
}

}  // namespace maat
