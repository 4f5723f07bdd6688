#include <doctest.h>

#include "helpers.hpp"
#include "maat/mediator/wire.hpp"
#include "maat/simnet/scenario.hpp"

using namespace maat;
using namespace maat::wire;
using nlohmann::json;

namespace {

std::shared_ptr<Agent> make_agent(const std::string& tag) {
    auto state = std::make_shared<SimState>();
    state->topology = simnet::load_topology(
        simnet::load_json_file(test::fixture_path("topologies/uc2.topo.json")));
    AgentConfig cfg;
    cfg.agent_id = tag;
    cfg.audit_path = test::temp_file(tag + ".audit.jsonl");
    std::remove(cfg.audit_path.c_str());
    return std::make_shared<Agent>(cfg, state, std::make_shared<LogicalClock>(),
                                   builtin_ontology());
}

json envelope(const std::string& type, json body, int id = 1) {
    return {{"type", type}, {"msg_id", id}, {"body", std::move(body)}};
}

}  // namespace

TEST_CASE("envelope conformance: every reply carries type, msg_id, body") {
    auto agent = make_agent("wire-conf");
    InProcTransport t(*agent);

    auto ping = t.request(envelope("PING", json::object(), 41));
    CHECK(ping.at("type") == "PONG");
    CHECK(ping.at("msg_id") == 41);
    CHECK(ping.contains("body"));

    auto submit = t.request(envelope(
        "SUBMIT_INTENT",
        {{"intent", "<discover, hadoop, NULL>"}, {"requester", "actuator"}}, 42));
    CHECK(submit.at("type") == "RESULT");
    CHECK(submit.at("msg_id") == 42);
    CHECK(submit.at("body").at("outcome").at("kind") == "reified");
    CHECK(submit.at("body").contains("session_id"));

    auto adv = t.request(envelope(
        "ADVERTIZE",
        {{"service", "telemetry"}, {"attrs", json::object()}, {"origin", "hadoop-a"}}, 43));
    CHECK(adv.at("type") == "RESULT");
    CHECK(adv.at("body").at("status") == "ok");

    auto sessions = t.request(envelope("LIST_SESSIONS", json::object(), 44));
    CHECK(sessions.at("type") == "RESULT");
    CHECK(sessions.at("body").at("sessions").size() == 1);
}

TEST_CASE("malformed envelopes get structured errors, never a crash") {
    auto agent = make_agent("wire-err");

    CHECK(agent->handle_line("not json at all").at("type") == "ERROR");
    CHECK(agent->handle_line("[1,2,3]").at("type") == "ERROR");
    CHECK(agent->handle_envelope({{"msg_id", 1}}).at("type") == "ERROR");
    CHECK(agent->handle_envelope(envelope("NO_SUCH_TYPE", json::object())).at("type") ==
          "ERROR");
    // SUBMIT_INTENT missing its body fields
    auto bad = agent->handle_envelope(envelope("SUBMIT_INTENT", json::object()));
    CHECK(bad.at("type") == "ERROR");
    CHECK(bad.at("body").contains("message"));
    // a broken intent is a rejected RESULT, not a wire error
    auto rejected = agent->handle_envelope(envelope(
        "SUBMIT_INTENT", {{"intent", "<oops"}, {"requester", "actuator"}}));
    CHECK(rejected.at("type") == "RESULT");
    CHECK(rejected.at("body").at("rejected") == true);
}

TEST_CASE("tcp round trip on an ephemeral port") {
    auto agent = make_agent("wire-tcp");
    TcpServer server(*agent, 0);
    server.start();
    REQUIRE(server.port() > 0);

    auto pong = tcp_request("127.0.0.1", server.port(), envelope("PING", json::object(), 7));
    CHECK(pong.at("type") == "PONG");
    CHECK(pong.at("msg_id") == 7);

    auto submit = tcp_request(
        "127.0.0.1", server.port(),
        envelope("SUBMIT_INTENT",
                 {{"intent", "<discover, hadoop, NULL>"}, {"requester", "actuator"}}, 8));
    CHECK(submit.at("type") == "RESULT");
    CHECK(submit.at("body").at("outcome").at("kind") == "reified");

    auto adv = tcp_request(
        "127.0.0.1", server.port(),
        envelope("ADVERTIZE",
                 {{"service", "scratch"}, {"attrs", json::object()}, {"origin", "hadoop-b"}},
                 9));
    CHECK(adv.at("type") == "RESULT");

    server.stop();
    CHECK_THROWS_AS(tcp_request("127.0.0.1", server.port(), envelope("PING", json::object())),
                    std::runtime_error);
}

TEST_CASE("parse_endpoint") {
    auto [host, port] = parse_endpoint("localhost:7777");
    CHECK(host == "localhost");
    CHECK(port == 7777);
    CHECK_THROWS_AS(parse_endpoint("nocolon"), std::invalid_argument);
    CHECK_THROWS_AS(parse_endpoint("host:notanumber"), std::invalid_argument);
}
