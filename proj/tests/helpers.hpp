#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "maat/intent.hpp"
#include "maat/mediator/mediate.hpp"
#include "maat/simnet/topology.hpp"

#ifndef MAAT_FIXTURES_DIR
#define MAAT_FIXTURES_DIR "fixtures"
#endif

namespace maat::test {

inline std::string fixture_path(const std::string& rel) {
    return std::string(MAAT_FIXTURES_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing fixture " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// ---- random valid-AST generator ------------------------------------------

class AstGen {
  public:
    explicit AstGen(std::uint64_t seed) : rng_(seed) {}

    IntentExpr intent(int max_depth = 8) { return gen_intent(1, max_depth); }

    // Verbs restricted to the built-in ontology, subjects matching each
    // verb's allowed kinds, so the result always validates and compiles.
    IntentExpr valid_intent(int max_depth = 6) { return gen_valid(1, max_depth); }

    std::mt19937_64& rng() { return rng_; }

  private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::string identifier(int min_len = 3, int max_len = 8) {
        static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz";
        int len = pick(min_len, max_len);
        std::string s;
        for (int i = 0; i < len; ++i) s += alphabet[pick(0, 25)];
        if (s == "null") s += "x";
        return s;
    }

    std::string atom_text() {
        switch (pick(0, 3)) {
            case 0: return identifier();
            case 1: return "http://" + identifier() + ".com/" + identifier();
            case 2: return identifier() + "." + identifier();
            default: return identifier() + "-" + std::to_string(pick(0, 9999));
        }
    }

    TypedValue value() {
        switch (pick(0, 3)) {
            case 0: {
                static const char* units[] = {"", "ms", "s", "kbps"};
                return TypedValue{Quantity{double(pick(0, 999)), units[pick(0, 3)]}};
            }
            case 1:
                return TypedValue{Cidr{std::uint32_t(pick(0, 255)) << 24 |
                                           std::uint32_t(pick(0, 255)) << 16,
                                       pick(8, 30)}};
            default:
                // letter-first text never reparses as quantity or CIDR
                return TypedValue{identifier()};
        }
    }

    ModifierClause clause() {
        ModifierClause c;
        int n = pick(1, 3);
        for (int i = 0; i < n; ++i) {
            ModifierAtom a;
            a.key = identifier();
            a.comparator = static_cast<Comparator>(pick(0, 4));
            a.value = value();
            a.priority = pick(0, 1) ? Priority::Essential : Priority::Desirable;
            c.atoms.push_back(std::move(a));
        }
        return c;
    }

    void fill_modifiers(IntentExpr& e) {
        int n = pick(0, 3);
        for (int i = 0; i < n; ++i) e.modifiers.push_back(clause());
    }

    IntentExpr gen_intent(int depth, int max_depth) {
        IntentExpr e;
        e.verb = identifier();
        e.object = atom_text();
        fill_modifiers(e);
        int roll = pick(0, 9);
        if (roll < 4 || depth >= max_depth) {
            // null subject
        } else if (roll < 7) {
            e.subject->v = atom_text();
        } else {
            e.subject->v = gen_intent(depth + 1, max_depth);
        }
        return e;
    }

    IntentExpr gen_valid(int depth, int max_depth) {
        IntentExpr e;
        int roll = pick(0, 9);
        bool can_nest = depth < max_depth;
        int subject_roll = pick(0, 9);
        bool want_nested = can_nest && subject_roll >= 7;
        bool want_identifier = !want_nested && subject_roll >= 4;

        static const char* any_subject[] = {"connect", "discover", "push", "pull", "allocate"};
        if (!want_nested && !want_identifier && roll < 2) {
            e.verb = roll == 0 ? "prioritize" : "block";
        } else if (!want_nested && roll == 2) {
            e.verb = "advertize";
        } else {
            e.verb = any_subject[pick(0, 4)];
        }
        e.object = atom_text();
        fill_modifiers(e);
        if (want_nested) {
            e.subject->v = gen_valid(depth + 1, max_depth);
        } else if (want_identifier) {
            e.subject->v = atom_text();
        }
        return e;
    }

    std::mt19937_64 rng_;
};

// ---- independent mediation oracle ----------------------------------------
//
// Brute force over the candidate universe: filter hard, score everything,
// argmax with lexicographic tie-break. Kept free of the mediate() code path;
// constraint evaluation is re-derived here for the quantity/text values the
// randomized trials generate.

inline bool oracle_value_ok(const TypedValue& attr, Comparator cmp, const TypedValue& want) {
    if (attr.is_quantity() && want.is_quantity()) {
        double a = std::get<Quantity>(attr.v).number;
        double w = std::get<Quantity>(want.v).number;
        switch (cmp) {
            case Comparator::Eq: return a == w;
            case Comparator::Lt: return a < w;
            case Comparator::Gt: return a > w;
            case Comparator::Le: return a <= w;
            case Comparator::Ge: return a >= w;
        }
    }
    if (attr.is_text() && want.is_text()) {
        const auto& a = std::get<std::string>(attr.v);
        const auto& w = std::get<std::string>(want.v);
        switch (cmp) {
            case Comparator::Eq: return a == w;
            case Comparator::Lt: return a < w;
            case Comparator::Gt: return a > w;
            case Comparator::Le: return a <= w;
            case Comparator::Ge: return a >= w;
        }
    }
    return false;
}

inline bool oracle_constraint_ok(const simnet::AttrMap& attrs, const Constraint& c) {
    auto it = attrs.find(c.key);
    if (it == attrs.end()) return false;
    for (const auto& v : it->second) {
        if (oracle_value_ok(v, c.comparator, c.value)) return true;
    }
    return false;
}

struct OracleResult {
    bool reified = false;
    std::string selected;  // node id
};

inline OracleResult oracle_select(const std::vector<simnet::Candidate>& universe,
                                  const std::vector<Constraint>& constraints,
                                  const std::vector<PolicyRule>& policies, double w_soft,
                                  double utility_scale = 1.0) {
    std::vector<Constraint> hard, soft;
    for (const auto& c : constraints) {
        (c.hardness == Hardness::Hard ? hard : soft).push_back(c);
    }
    OracleResult result;
    double best = 0.0;
    for (const auto& cand : universe) {
        bool ok = true;
        for (const auto& h : hard) {
            if (!oracle_constraint_ok(cand.attributes, h)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        double ratio = 1.0;
        if (!soft.empty()) {
            int sat = 0;
            for (const auto& s : soft) {
                if (oracle_constraint_ok(cand.attributes, s)) ++sat;
            }
            ratio = double(sat) / double(soft.size());
        }
        double utility = 0.0;
        for (const auto& rule : policies) {
            bool match = true;
            for (const auto& p : rule.predicate) {
                if (!oracle_constraint_ok(cand.attributes, p)) {
                    match = false;
                    break;
                }
            }
            if (match) utility += rule.utility_delta * utility_scale;
        }
        double score = w_soft * ratio + utility;
        if (!result.reified || score > best ||
            (score == best && cand.node_id < result.selected)) {
            result.reified = true;
            result.selected = cand.node_id;
            best = score;
        }
    }
    return result;
}

// Randomized (topology, constraints, policies) trial for oracle equivalence.
struct MediationTrial {
    simnet::Topology topo;
    std::vector<Constraint> constraints;
    std::vector<PolicyRule> policies;
    std::string requester = "req";
    std::string service = "svc";
};

inline MediationTrial make_trial(std::mt19937_64& rng) {
    auto pick = [&rng](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    MediationTrial t;
    t.topo.subnets.push_back({"s0", Cidr{0x0a000000u, 8}, ""});
    simnet::Node req;
    req.node_id = "req";
    req.subnet_id = "s0";
    t.topo.nodes.push_back(req);

    int n = pick(1, 31);
    for (int i = 0; i < n; ++i) {
        simnet::Node node;
        char buf[8];
        std::snprintf(buf, sizeof(buf), "n%02d", i);
        node.node_id = buf;
        node.subnet_id = "s0";
        node.asn = 64500 + pick(0, 3);
        simnet::ServiceInstance svc;
        svc.name = t.service;
        svc.attrs["x"] = {TypedValue{Quantity{double(pick(0, 20)), ""}}};
        svc.attrs["y"] = {TypedValue{Quantity{double(pick(0, 20)), ""}}};
        node.services.push_back(std::move(svc));
        t.topo.nodes.push_back(std::move(node));
    }

    int nc = pick(0, 4);
    const char* keys[] = {"x", "y"};
    std::set<std::string> eq_hard_keys;
    for (int i = 0; i < nc; ++i) {
        Constraint c;
        c.key = keys[pick(0, 1)];
        c.comparator = static_cast<Comparator>(pick(0, 4));
        c.value = TypedValue{Quantity{double(pick(0, 20)), ""}};
        c.hardness = pick(0, 1) ? Hardness::Hard : Hardness::Soft;
        if (c.comparator == Comparator::Eq && c.hardness == Hardness::Hard &&
            !eq_hard_keys.insert(c.key).second) {
            // repeated hard equality on one key means set discovery, which
            // the single-selection oracle does not model
            c.comparator = Comparator::Ge;
        }
        t.constraints.push_back(std::move(c));
    }

    int np = pick(0, 3);
    for (int i = 0; i < np; ++i) {
        PolicyRule rule;
        rule.stakeholder_id = "op" + std::to_string(i);
        rule.priority = i;
        rule.utility_delta = double(pick(-10, 10));
        Constraint p;
        p.key = keys[pick(0, 1)];
        p.comparator = static_cast<Comparator>(pick(0, 4));
        p.value = TypedValue{Quantity{double(pick(0, 20)), ""}};
        rule.predicate.push_back(std::move(p));
        t.policies.push_back(std::move(rule));
    }
    return t;
}

// A single-discover plan over the trial's service and constraints.
inline ReificationPlan trial_plan(const MediationTrial& t) {
    ReificationPlan plan;
    PrimitiveAction a;
    a.kind = ActionKind::Discover;
    a.name = t.service;
    a.constraints = t.constraints;
    plan.actions.push_back(std::move(a));
    plan.root = 0;
    return plan;
}

}  // namespace maat::test
