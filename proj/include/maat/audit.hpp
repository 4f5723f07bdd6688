#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maat/mediator/mediate.hpp"

namespace maat::audit {

// One immutable line of the append-only mediation log.
struct MediationLogRecord {
    std::string session_id;
    std::string agent_id;
    std::uint64_t logical_timestamp = 0;
    std::string intent;       // canonical text
    std::string plan_digest;  // hash of the canonical plan JSON
    OutcomeKind outcome = OutcomeKind::Failed;
    bool rejected = false;  // intent never reached mediation
    nlohmann::json bindings = nlohmann::json::object();
    int hard_total = 0;
    int hard_satisfied = 0;
    int soft_total = 0;
    int soft_satisfied = 0;
    int escalation_count = 0;
};

nlohmann::json record_to_json(const MediationLogRecord& record);
MediationLogRecord record_from_json(const nlohmann::json& j);

// Serializes one record per line; the writer owns the file handle and
// appends only.
class AuditLog {
  public:
    explicit AuditLog(std::string path);
    void append(const MediationLogRecord& record);
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

std::vector<MediationLogRecord> read_log(const std::string& path);

struct MediationScore {
    double value = 0.0;  // in [0, 1]
    double soft_ratio = 0.0;
    bool fallback_penalty_applied = false;
};

// Reified -> soft satisfaction ratio (1 when no soft constraints);
// Failed and fallback -> 0.
MediationScore score_session(const MediationLogRecord& record);

struct AgentScore {
    double mean = 0.0;
    std::size_t count = 0;
    double failure_fraction = 0.0;
};

class EmptyWindow : public std::runtime_error {
  public:
    EmptyWindow() : std::runtime_error("no terminal records in window") {}
};

AgentScore score_agent(const std::vector<MediationLogRecord>& records);

// Per-agent aggregates over a whole log.
std::map<std::string, AgentScore> score_by_agent(
    const std::vector<MediationLogRecord>& records);

}  // namespace maat::audit
