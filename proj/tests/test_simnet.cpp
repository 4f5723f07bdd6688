#include <doctest.h>

#include "helpers.hpp"
#include "maat/simnet/scenario.hpp"
#include "maat/simnet/topology.hpp"

using namespace maat;
using namespace maat::simnet;

namespace {

Topology load_fixture(const std::string& name) {
    return load_topology(load_json_file(test::fixture_path("topologies/" + name)));
}

nlohmann::json tiny_topology() {
    return nlohmann::json::parse(R"({
        "seed": 9,
        "subnets": [{"id": "s", "cidr": "10.0.0.0/24"}],
        "nodes": [
            {"id": "a", "address": "10.0.0.1", "subnet": "s"},
            {"id": "b", "address": "10.0.0.2", "subnet": "s"},
            {"id": "c", "address": "10.0.0.3", "subnet": "s"}
        ],
        "links": [
            {"a": "a", "b": "b", "rtt_ms": 10},
            {"a": "b", "b": "c", "rtt_ms": 15}
        ]
    })");
}

}  // namespace

TEST_CASE("load_topology validates the UC1 fixture") {
    auto topo = load_fixture("uc1.topo.json");
    CHECK(topo.nodes.size() == 3);
    CHECK(topo.subnets.size() == 1);
    CHECK(topo.find_node("bob") != nullptr);
    CHECK(topo.find_node("bob")->find_service("GoogleDocs") != nullptr);
}

TEST_CASE("load_topology rejects invalid documents") {
    auto doc = tiny_topology();
    doc["links"].push_back({{"a", "a"}, {"b", "ghost"}, {"rtt_ms", 5}});
    CHECK_THROWS_AS(load_topology(doc), TopologyError);

    auto bad_addr = tiny_topology();
    bad_addr["nodes"][0]["address"] = "192.168.0.1";
    CHECK_THROWS_AS(load_topology(bad_addr), TopologyError);

    auto bad_rtt = tiny_topology();
    bad_rtt["links"][0]["rtt_ms"] = 0;
    CHECK_THROWS_AS(load_topology(bad_rtt), TopologyError);

    auto cyclic = tiny_topology();
    cyclic["subnets"] = {{{"id", "p"}, {"cidr", "10.0.0.0/16"}, {"parent", "q"}},
                         {{"id", "q"}, {"cidr", "10.1.0.0/16"}, {"parent", "p"}}};
    cyclic["nodes"] = nlohmann::json::array();
    cyclic["links"] = nlohmann::json::array();
    CHECK_THROWS_AS(load_topology(cyclic), TopologyError);

    // degenerate empty topology is valid
    CHECK_NOTHROW(load_topology(nlohmann::json::object()));
}

TEST_CASE("path_rtt") {
    auto topo = load_topology(tiny_topology());
    CHECK(path_rtt(topo, "a", "b") == 10.0);
    CHECK(path_rtt(topo, "a", "c") == 25.0);  // additivity, no direct link
    CHECK(path_rtt(topo, "c", "a") == 25.0);  // symmetric
    CHECK(path_rtt(topo, "a", "a") == 0.0);

    auto doc = tiny_topology();
    doc["links"].push_back({{"a", "a"}, {"b", "c"}, {"rtt_ms", 40}});
    auto triangle = load_topology(doc);
    CHECK(path_rtt(triangle, "a", "c") == 25.0);  // shortest path beats direct

    doc["nodes"].push_back({{"id", "island"}, {"address", "10.0.0.9"}, {"subnet", "s"}});
    auto with_island = load_topology(doc);
    CHECK_FALSE(path_rtt(with_island, "a", "island").has_value());
}

TEST_CASE("path_rtt equals a Floyd-Warshall oracle on random graphs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + int(rng() % 8);
        Topology topo;
        topo.subnets.push_back({"s", Cidr{0x0a000000u, 8}, ""});
        for (int i = 0; i < n; ++i) {
            Node node;
            node.node_id = "n" + std::to_string(i);
            node.subnet_id = "s";
            topo.nodes.push_back(node);
        }
        std::vector<std::vector<double>> d(n, std::vector<double>(n, 1e18));
        for (int i = 0; i < n; ++i) d[i][i] = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng() % 3 == 0) continue;
                double w = 1.0 + double(rng() % 50);
                topo.links.push_back({"n" + std::to_string(i), "n" + std::to_string(j), w});
                d[i][j] = std::min(d[i][j], w);
                d[j][i] = d[i][j];
            }
        }
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
                }
            }
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                auto got = path_rtt(topo, "n" + std::to_string(i), "n" + std::to_string(j));
                if (d[i][j] >= 1e17) {
                    CHECK_FALSE(got.has_value());
                } else {
                    REQUIRE(got.has_value());
                    CHECK(*got == doctest::Approx(d[i][j]));
                }
            }
        }
    }
}

TEST_CASE("match_candidates materializes attributes") {
    auto topo = load_fixture("uc2.topo.json");
    auto candidates = match_candidates(topo, "hadoop", "actuator");
    REQUIRE(candidates.size() == 2);
    CHECK(candidates[0].node_id == "hadoop-a");  // deterministic order
    CHECK(candidates[0].attributes.at("rtt")[0] == TypedValue{Quantity{40.0, "ms"}});
    CHECK(candidates[1].attributes.at("rtt")[0] == TypedValue{Quantity{70.0, "ms"}});
    CHECK(candidates[0].attributes.at("net")[0] == TypedValue{Cidr{0x01020300u, 24}});
    CHECK(candidates[0].attributes.count("capacity") == 1);

    CHECK(match_candidates(topo, "nosuch", "actuator").empty());

    // a requester hosting the service is its own candidate at rtt 0
    auto self = match_candidates(topo, "hadoop", "hadoop-a");
    REQUIRE(self.size() == 2);
    CHECK(self[0].attributes.at("rtt")[0] == TypedValue{Quantity{0.0, "ms"}});
}

TEST_CASE("match_candidates respects subnet scope") {
    auto topo = load_fixture("uc3.topo.json");
    CHECK(match_candidates(topo, "cache", "origin").size() == 2);
    CHECK(match_candidates(topo, "cache", "origin", "metro-east").size() == 1);
    CHECK(match_candidates(topo, "cache", "origin", "core").empty());
}

TEST_CASE("multicast allocator") {
    MulticastAllocator alloc;
    auto first = alloc.allocate(32, {"alice", "bob"});
    CHECK(first.group == "239.0.0.1");  // lowest free address
    CHECK(first.ttl == 32);
    auto second = alloc.allocate(16, {"x"});
    CHECK(second.group == "239.0.0.2");
    CHECK_THROWS_AS(alloc.allocate(32, {}), std::invalid_argument);
    CHECK_THROWS_AS(alloc.allocate(0, {"a"}), std::invalid_argument);

    MulticastAllocator tiny(Cidr{0xef000000u, 30});  // room for 3 groups
    tiny.allocate(1, {"a"});
    tiny.allocate(1, {"a"});
    tiny.allocate(1, {"a"});
    CHECK_THROWS_AS(tiny.allocate(1, {"a"}), std::runtime_error);
}
