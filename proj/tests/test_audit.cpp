#include <doctest.h>

#include <cstdio>

#include "helpers.hpp"
#include "maat/audit.hpp"
#include "maat/simnet/scenario.hpp"

using namespace maat;
using namespace maat::audit;

namespace {

MediationLogRecord make_record(OutcomeKind kind, int soft_total, int soft_satisfied) {
    MediationLogRecord r;
    r.session_id = "a-s1";
    r.agent_id = "a";
    r.intent = "<discover, svc, NULL>";
    r.plan_digest = "deadbeef";
    r.outcome = kind;
    r.soft_total = soft_total;
    r.soft_satisfied = soft_satisfied;
    return r;
}

}  // namespace

TEST_CASE("record json round trip") {
    auto r = make_record(OutcomeKind::Reified, 2, 1);
    r.logical_timestamp = 7;
    r.hard_total = 3;
    r.hard_satisfied = 3;
    r.escalation_count = 1;
    r.bindings = {{"0", {"nodeA"}}};
    auto j = record_to_json(r);
    CHECK(j.at("outcome") == "reified");
    auto back = record_from_json(j);
    CHECK(record_to_json(back) == j);

    r.rejected = true;
    auto jr = record_to_json(r);
    CHECK(jr.at("outcome") == "rejected");
    CHECK(record_from_json(jr).rejected);
}

TEST_CASE("session scores") {
    CHECK(score_session(make_record(OutcomeKind::Reified, 0, 0)).value == 1.0);
    CHECK(score_session(make_record(OutcomeKind::Reified, 2, 1)).value == 0.5);
    CHECK(score_session(make_record(OutcomeKind::Reified, 4, 4)).value == 1.0);
    CHECK(score_session(make_record(OutcomeKind::Failed, 2, 2)).value == 0.0);
    auto fb = score_session(make_record(OutcomeKind::NonIdnFallback, 0, 0));
    CHECK(fb.value == 0.0);
    CHECK(fb.fallback_penalty_applied);
}

TEST_CASE("agent scores aggregate sessions") {
    std::vector<MediationLogRecord> window = {
        make_record(OutcomeKind::Reified, 0, 0),   // 1.0
        make_record(OutcomeKind::Failed, 0, 0),    // 0.0
        make_record(OutcomeKind::Reified, 2, 1),   // 0.5
        make_record(OutcomeKind::Reified, 2, 2),   // 1.0
    };
    auto s = score_agent(window);
    CHECK(s.count == 4);
    CHECK(s.mean == doctest::Approx(0.625));
    CHECK(s.failure_fraction == doctest::Approx(0.25));

    CHECK_THROWS_AS(score_agent({}), EmptyWindow);

    auto second = make_record(OutcomeKind::Failed, 0, 0);
    second.agent_id = "b";
    auto by_agent = score_by_agent({window[0], second});
    CHECK(by_agent.at("a").mean == 1.0);
    CHECK(by_agent.at("b").mean == 0.0);
    CHECK(by_agent.at("b").failure_fraction == 1.0);
}

TEST_CASE("the log is append-only across writer instances") {
    auto path = test::temp_file("audit-append.jsonl");
    std::remove(path.c_str());
    {
        AuditLog log(path);
        log.append(make_record(OutcomeKind::Reified, 0, 0));
        log.append(make_record(OutcomeKind::Failed, 1, 0));
    }
    {
        AuditLog log(path);  // reopening must not truncate
        log.append(make_record(OutcomeKind::Reified, 2, 2));
    }
    auto records = read_log(path);
    REQUIRE(records.size() == 3);
    CHECK(records[0].outcome == OutcomeKind::Reified);
    CHECK(records[1].outcome == OutcomeKind::Failed);
    CHECK(records[2].soft_satisfied == 2);
}

TEST_CASE("monotone improvement: satisfying more soft constraints never lowers the score") {
    for (int total = 1; total <= 6; ++total) {
        double prev = -1.0;
        for (int sat = 0; sat <= total; ++sat) {
            double v = score_session(make_record(OutcomeKind::Reified, total, sat)).value;
            CHECK(v >= prev);
            prev = v;
        }
        CHECK(prev == 1.0);
    }
}

TEST_CASE("replaying a scenario reproduces the audit log byte for byte") {
    auto doc = simnet::load_json_file(test::fixture_path("scenarios/uc1.scenario.json"));
    auto base = test::fixture_path("scenarios");
    auto path = test::temp_file("audit-replay.jsonl");
    simnet::run_scenario(doc, base, path);
    auto first = test::read_file(path);
    simnet::run_scenario(doc, base, path);
    CHECK(test::read_file(path) == first);
    // and the log is well formed
    auto records = read_log(path);
    REQUIRE_FALSE(records.empty());
    for (const auto& r : records) {
        CHECK_FALSE(r.session_id.empty());
        CHECK_FALSE(r.agent_id.empty());
    }
}
