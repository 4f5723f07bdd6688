#include "maat/simnet/topology.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

namespace maat::simnet {

using nlohmann::json;

AttrMap attrs_from_json(const json& j) {
    AttrMap out;
    for (const auto& [key, value] : j.items()) {
        auto& slot = out[key];
        auto add = [&slot](const json& v) {
            if (v.is_number()) {
                slot.push_back(TypedValue{Quantity{v.get<double>(), ""}});
            } else {
                slot.push_back(parse_value(v.get<std::string>()));
            }
        };
        if (value.is_array()) {
            for (const auto& v : value) add(v);
        } else {
            add(value);
        }
    }
    return out;
}

json attrs_to_json(const AttrMap& attrs) {
    json out = json::object();
    for (const auto& [key, values] : attrs) {
        if (values.size() == 1) {
            out[key] = render_value(values[0]);
        } else {
            json arr = json::array();
            for (const auto& v : values) arr.push_back(render_value(v));
            out[key] = std::move(arr);
        }
    }
    return out;
}

ServiceInstance* Node::find_service(const std::string& name) {
    for (auto& s : services) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

const ServiceInstance* Node::find_service(const std::string& name) const {
    return const_cast<Node*>(this)->find_service(name);
}

Node* Topology::find_node(const std::string& id) {
    for (auto& n : nodes) {
        if (n.node_id == id) return &n;
    }
    return nullptr;
}

const Node* Topology::find_node(const std::string& id) const {
    return const_cast<Topology*>(this)->find_node(id);
}

const Subnet* Topology::find_subnet(const std::string& id) const {
    for (const auto& s : subnets) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

bool Topology::subnet_within(const std::string& subnet, const std::string& root) const {
    std::string cur = subnet;
    for (std::size_t hops = 0; hops <= subnets.size(); ++hops) {
        if (cur == root) return true;
        const Subnet* s = find_subnet(cur);
        if (!s || s->parent.empty()) return false;
        cur = s->parent;
    }
    return false;
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw TopologyError("topology schema error at " + path + ": " + what);
}

bool address_in_cidr(const std::string& address, const Cidr& cidr) {
    auto parsed = parse_cidr(address + "/32");
    if (!parsed) return false;
    if (cidr.prefix_len == 0) return true;
    std::uint32_t mask = ~std::uint32_t(0) << (32 - cidr.prefix_len);
    return (parsed->address & mask) == (cidr.address & mask);
}

}  // namespace

Topology load_topology(const json& doc) {
    Topology topo;
    topo.seed = doc.value("seed", std::uint64_t(0));

    std::set<std::string> subnet_ids;
    for (std::size_t i = 0; i < doc.value("subnets", json::array()).size(); ++i) {
        const auto& js = doc["subnets"][i];
        const std::string path = "/subnets/" + std::to_string(i);
        Subnet s;
        if (!js.contains("id")) schema_error(path, "missing id");
        s.id = js["id"].get<std::string>();
        auto cidr = parse_cidr(js.value("cidr", std::string()));
        if (!cidr) schema_error(path + "/cidr", "not a valid v4 CIDR");
        s.cidr = *cidr;
        s.parent = js.value("parent", std::string());
        if (!subnet_ids.insert(s.id).second) schema_error(path, "duplicate subnet id");
        topo.subnets.push_back(std::move(s));
    }
    for (const auto& s : topo.subnets) {
        if (!s.parent.empty() && !subnet_ids.count(s.parent)) {
            throw TopologyError("subnet " + s.id + " references unknown parent " + s.parent);
        }
    }
    // Parent chains must terminate at a root (the subnet graph is a forest).
    for (const auto& s : topo.subnets) {
        std::string cur = s.id;
        std::size_t hops = 0;
        while (true) {
            const Subnet* sub = topo.find_subnet(cur);
            if (!sub || sub->parent.empty()) break;
            cur = sub->parent;
            if (++hops > topo.subnets.size()) {
                throw TopologyError("subnet graph contains a cycle through " + s.id);
            }
        }
    }

    std::set<std::string> node_ids;
    for (std::size_t i = 0; i < doc.value("nodes", json::array()).size(); ++i) {
        const auto& jn = doc["nodes"][i];
        const std::string path = "/nodes/" + std::to_string(i);
        Node n;
        if (!jn.contains("id")) schema_error(path, "missing id");
        n.node_id = jn["id"].get<std::string>();
        n.address = jn.value("address", std::string());
        n.subnet_id = jn.value("subnet", std::string());
        n.asn = jn.value("asn", 0L);
        if (jn.contains("attrs")) n.attrs = attrs_from_json(jn["attrs"]);
        for (const auto& jsvc : jn.value("services", json::array())) {
            ServiceInstance svc;
            svc.name = jsvc.at("name").get<std::string>();
            if (svc.name.empty()) schema_error(path + "/services", "empty service name");
            if (jsvc.contains("attrs")) svc.attrs = attrs_from_json(jsvc["attrs"]);
            n.services.push_back(std::move(svc));
        }
        if (!node_ids.insert(n.node_id).second) {
            throw TopologyError("duplicate node id " + n.node_id);
        }
        if (!n.subnet_id.empty()) {
            const Subnet* sub = topo.find_subnet(n.subnet_id);
            if (!sub) {
                throw TopologyError("node " + n.node_id + " references unknown subnet " +
                                    n.subnet_id);
            }
            if (!n.address.empty() && !address_in_cidr(n.address, sub->cidr)) {
                throw TopologyError("node " + n.node_id + " address " + n.address +
                                    " outside subnet " + n.subnet_id);
            }
        }
        topo.nodes.push_back(std::move(n));
    }

    for (std::size_t i = 0; i < doc.value("links", json::array()).size(); ++i) {
        const auto& jl = doc["links"][i];
        const std::string path = "/links/" + std::to_string(i);
        Link l;
        l.a = jl.value("a", std::string());
        l.b = jl.value("b", std::string());
        l.rtt_ms = jl.value("rtt_ms", 0.0);
        if (!node_ids.count(l.a)) throw TopologyError("link endpoint " + l.a + " missing");
        if (!node_ids.count(l.b)) throw TopologyError("link endpoint " + l.b + " missing");
        if (l.rtt_ms <= 0.0) schema_error(path + "/rtt_ms", "rtt must be > 0");
        topo.links.push_back(std::move(l));
    }
    return topo;
}

json topology_to_json(const Topology& topo) {
    json subnets = json::array();
    for (const auto& s : topo.subnets) {
        json js = {{"id", s.id}, {"cidr", render_cidr(s.cidr)}};
        if (!s.parent.empty()) js["parent"] = s.parent;
        subnets.push_back(std::move(js));
    }
    json nodes = json::array();
    for (const auto& n : topo.nodes) {
        json jn = {{"id", n.node_id},
                   {"address", n.address},
                   {"subnet", n.subnet_id},
                   {"asn", n.asn},
                   {"attrs", attrs_to_json(n.attrs)}};
        json services = json::array();
        for (const auto& s : n.services) {
            services.push_back({{"name", s.name}, {"attrs", attrs_to_json(s.attrs)}});
        }
        jn["services"] = std::move(services);
        nodes.push_back(std::move(jn));
    }
    json links = json::array();
    for (const auto& l : topo.links) {
        links.push_back({{"a", l.a}, {"b", l.b}, {"rtt_ms", l.rtt_ms}});
    }
    return json{{"seed", topo.seed},
                {"subnets", subnets},
                {"nodes", nodes},
                {"links", links}};
}

std::optional<double> path_rtt(const Topology& topo, const std::string& a,
                               const std::string& b) {
    if (!topo.find_node(a) || !topo.find_node(b)) return std::nullopt;
    if (a == b) return 0.0;

    std::map<std::string, std::vector<std::pair<std::string, double>>> adj;
    for (const auto& l : topo.links) {
        adj[l.a].push_back({l.b, l.rtt_ms});
        adj[l.b].push_back({l.a, l.rtt_ms});
    }
    std::map<std::string, double> dist;
    using Entry = std::pair<double, std::string>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[a] = 0.0;
    heap.push({0.0, a});
    while (!heap.empty()) {
        auto [d, node] = heap.top();
        heap.pop();
        if (d > dist[node]) continue;
        if (node == b) return d;
        for (const auto& [next, w] : adj[node]) {
            double nd = d + w;
            auto it = dist.find(next);
            if (it == dist.end() || nd < it->second) {
                dist[next] = nd;
                heap.push({nd, next});
            }
        }
    }
    return std::nullopt;
}

std::vector<Candidate> match_candidates(const Topology& topo,
                                        const std::string& service_name,
                                        const std::string& requester,
                                        const std::string& scope_subnet) {
    std::vector<Candidate> out;
    for (const auto& node : topo.nodes) {
        const ServiceInstance* svc = node.find_service(service_name);
        if (!svc) continue;
        if (!scope_subnet.empty() && !topo.subnet_within(node.subnet_id, scope_subnet)) {
            continue;
        }
        Candidate c;
        c.node_id = node.node_id;
        c.service_name = service_name;
        c.attributes = node.attrs;
        if (auto rtt = path_rtt(topo, requester, node.node_id)) {
            c.attributes["rtt"] = {TypedValue{Quantity{*rtt, "ms"}}};
        }
        c.attributes["asn"] = {TypedValue{Quantity{static_cast<double>(node.asn), ""}}};
        if (const Subnet* sub = topo.find_subnet(node.subnet_id)) {
            c.attributes["net"] = {TypedValue{sub->cidr}};
        }
        for (const auto& [key, values] : svc->attrs) {
            auto& slot = c.attributes[key];
            slot.insert(slot.end(), values.begin(), values.end());
        }
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(),
              [](const Candidate& x, const Candidate& y) { return x.node_id < y.node_id; });
    return out;
}

MulticastAllocator::MulticastAllocator(Cidr pool) : pool_(pool) {}

MulticastAllocator::Allocation MulticastAllocator::allocate(int ttl,
                                                            std::vector<std::string> members) {
    if (members.empty()) throw std::invalid_argument("multicast group needs members");
    if (ttl < 1) throw std::invalid_argument("ttl must be >= 1");
    std::uint64_t pool_size =
        pool_.prefix_len >= 32 ? 1 : (std::uint64_t(1) << (32 - pool_.prefix_len));
    while (next_offset_ < pool_size && allocated_.count(pool_.address + next_offset_)) {
        ++next_offset_;
    }
    if (next_offset_ >= pool_size) throw std::runtime_error("multicast pool exhausted");
    std::uint32_t addr = pool_.address + next_offset_++;
    Allocation alloc;
    alloc.ttl = ttl;
    alloc.members = std::move(members);
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (addr >> 24) & 0xff, (addr >> 16) & 0xff,
                  (addr >> 8) & 0xff, addr & 0xff);
    alloc.group = buf;
    allocated_.emplace(addr, alloc);
    return alloc;
}

}  // namespace maat::simnet
