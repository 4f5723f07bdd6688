#include "maat/audit.hpp"

#include <fstream>

namespace maat::audit {

using nlohmann::json;

json record_to_json(const MediationLogRecord& r) {
    return json{{"session_id", r.session_id},
                {"agent_id", r.agent_id},
                {"logical_timestamp", r.logical_timestamp},
                {"intent", r.intent},
                {"plan_digest", r.plan_digest},
                {"outcome", r.rejected ? "rejected" : outcome_kind_name(r.outcome)},
                {"bindings", r.bindings},
                {"hard_total", r.hard_total},
                {"hard_satisfied", r.hard_satisfied},
                {"soft_total", r.soft_total},
                {"soft_satisfied", r.soft_satisfied},
                {"escalation_count", r.escalation_count}};
}

MediationLogRecord record_from_json(const json& j) {
    MediationLogRecord r;
    r.session_id = j.at("session_id").get<std::string>();
    r.agent_id = j.at("agent_id").get<std::string>();
    r.logical_timestamp = j.at("logical_timestamp").get<std::uint64_t>();
    r.intent = j.at("intent").get<std::string>();
    r.plan_digest = j.at("plan_digest").get<std::string>();
    const std::string kind = j.at("outcome").get<std::string>();
    if (kind == "reified") r.outcome = OutcomeKind::Reified;
    else if (kind == "non_idn_fallback") r.outcome = OutcomeKind::NonIdnFallback;
    else r.outcome = OutcomeKind::Failed;
    r.rejected = kind == "rejected";
    r.bindings = j.value("bindings", json::object());
    r.hard_total = j.value("hard_total", 0);
    r.hard_satisfied = j.value("hard_satisfied", 0);
    r.soft_total = j.value("soft_total", 0);
    r.soft_satisfied = j.value("soft_satisfied", 0);
    r.escalation_count = j.value("escalation_count", 0);
    return r;
}

AuditLog::AuditLog(std::string path) : path_(std::move(path)) {}

void AuditLog::append(const MediationLogRecord& record) {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot open audit log " + path_);
    out << record_to_json(record).dump() << '\n';
}

std::vector<MediationLogRecord> read_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read audit log " + path);
    std::vector<MediationLogRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_json(json::parse(line)));
    }
    return records;
}

MediationScore score_session(const MediationLogRecord& record) {
    MediationScore score;
    if (record.outcome == OutcomeKind::Reified) {
        score.soft_ratio = record.soft_total == 0
                               ? 1.0
                               : double(record.soft_satisfied) / double(record.soft_total);
        score.value = score.soft_ratio;
    } else {
        score.value = 0.0;
        score.fallback_penalty_applied = record.outcome == OutcomeKind::NonIdnFallback;
    }
    return score;
}

AgentScore score_agent(const std::vector<MediationLogRecord>& records) {
    if (records.empty()) throw EmptyWindow();
    AgentScore agg;
    agg.count = records.size();
    std::size_t failures = 0;
    double sum = 0.0;
    for (const auto& r : records) {
        sum += score_session(r).value;
        if (r.outcome != OutcomeKind::Reified) ++failures;
    }
    agg.mean = sum / double(records.size());
    agg.failure_fraction = double(failures) / double(records.size());
    return agg;
}

std::map<std::string, AgentScore> score_by_agent(
    const std::vector<MediationLogRecord>& records) {
    std::map<std::string, std::vector<MediationLogRecord>> grouped;
    for (const auto& r : records) grouped[r.agent_id].push_back(r);
    std::map<std::string, AgentScore> out;
    for (const auto& [agent, rs] : grouped) out[agent] = score_agent(rs);
    return out;
}

}  // namespace maat::audit
