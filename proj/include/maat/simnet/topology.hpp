#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maat/intent.hpp"

namespace maat::simnet {

// Attribute values are multi-valued so identity-like keys (userID) can hold
// sets; a constraint is satisfied when any value satisfies it.
using AttrMap = std::map<std::string, std::vector<TypedValue>>;

AttrMap attrs_from_json(const nlohmann::json& j);
nlohmann::json attrs_to_json(const AttrMap& attrs);

struct ServiceInstance {
    std::string name;
    AttrMap attrs;
};

struct Node {
    std::string node_id;
    std::string address;
    std::string subnet_id;
    long asn = 0;
    AttrMap attrs;
    std::vector<ServiceInstance> services;

    ServiceInstance* find_service(const std::string& name);
    const ServiceInstance* find_service(const std::string& name) const;
};

struct Subnet {
    std::string id;
    Cidr cidr;
    std::string parent;  // empty at the root
};

struct Link {
    std::string a;
    std::string b;
    double rtt_ms = 0.0;
};

class TopologyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Topology {
    std::uint64_t seed = 0;
    std::vector<Subnet> subnets;
    std::vector<Node> nodes;
    std::vector<Link> links;

    Node* find_node(const std::string& id);
    const Node* find_node(const std::string& id) const;
    const Subnet* find_subnet(const std::string& id) const;

    // True when `subnet` equals `root` or descends from it.
    bool subnet_within(const std::string& subnet, const std::string& root) const;
};

// Validating loader; throws TopologyError with the offending path.
Topology load_topology(const nlohmann::json& doc);
nlohmann::json topology_to_json(const Topology& topo);

// Minimum-rtt path between two nodes (Dijkstra); nullopt when unreachable.
std::optional<double> path_rtt(const Topology& topo, const std::string& a,
                               const std::string& b);

// A node/service instance that could satisfy an action, with the attributes
// the mediator evaluates constraints against.
struct Candidate {
    std::string node_id;
    std::string service_name;
    AttrMap attributes;
};

// The raw candidate universe for a service as seen from `requester`:
// every hosting node (optionally restricted to a subnet subtree), with
// rtt/asn/net materialized. No hard filtering here; ordered by node_id.
std::vector<Candidate> match_candidates(const Topology& topo,
                                        const std::string& service_name,
                                        const std::string& requester,
                                        const std::string& scope_subnet = "");

class MulticastAllocator {
  public:
    explicit MulticastAllocator(Cidr pool = Cidr{0xef000000u, 8});  // 239.0.0.0/8

    struct Allocation {
        std::string group;
        int ttl = 1;
        std::vector<std::string> members;
    };

    // Lowest free address in the pool; never reuses an active address.
    // Throws std::invalid_argument on empty membership or ttl < 1,
    // std::runtime_error when the pool is exhausted.
    Allocation allocate(int ttl, std::vector<std::string> members);

    const std::map<std::uint32_t, Allocation>& allocated() const { return allocated_; }

  private:
    Cidr pool_;
    std::uint32_t next_offset_ = 1;
    std::map<std::uint32_t, Allocation> allocated_;
};

}  // namespace maat::simnet
