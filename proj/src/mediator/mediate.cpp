#include "maat/mediator/mediate.hpp"

#include <algorithm>
#include <cmath>

namespace maat {

using simnet::AttrMap;
using simnet::Candidate;

const char* outcome_kind_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Reified: return "reified";
        case OutcomeKind::NonIdnFallback: return "non_idn_fallback";
        case OutcomeKind::Failed: return "failed";
    }
    return "failed";
}

namespace {

bool cidr_contains(const Cidr& outer, const Cidr& inner) {
    if (outer.prefix_len > inner.prefix_len) return false;
    if (outer.prefix_len == 0) return true;
    std::uint32_t mask = ~std::uint32_t(0) << (32 - outer.prefix_len);
    return (outer.address & mask) == (inner.address & mask);
}

template <typename T>
bool apply_cmp(Comparator cmp, const T& a, const T& b) {
    switch (cmp) {
        case Comparator::Eq: return a == b;
        case Comparator::Lt: return a < b;
        case Comparator::Gt: return a > b;
        case Comparator::Le: return a <= b;
        case Comparator::Ge: return a >= b;
    }
    return false;
}

}  // namespace

bool value_satisfies(const TypedValue& attr, Comparator cmp, const TypedValue& want) {
    if (attr.is_quantity() && want.is_quantity()) {
        const auto& a = std::get<Quantity>(attr.v);
        const auto& w = std::get<Quantity>(want.v);
        if (!a.unit.empty() && !w.unit.empty() && a.unit != w.unit) return false;
        return apply_cmp(cmp, a.number, w.number);
    }
    if (attr.is_cidr() && want.is_cidr()) {
        if (cmp != Comparator::Eq) return false;
        return cidr_contains(std::get<Cidr>(want.v), std::get<Cidr>(attr.v));
    }
    // Mixed or textual values: compare canonical text.
    return apply_cmp(cmp, render_value(attr), render_value(want));
}

bool constraint_satisfied(const AttrMap& attrs, const Constraint& c) {
    auto it = attrs.find(c.key);
    if (it == attrs.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(), [&](const TypedValue& v) {
        return value_satisfies(v, c.comparator, c.value);
    });
}

double candidate_score(const Candidate& c, const std::vector<Constraint>& soft,
                       const std::vector<PolicyRule>& policies, const MediateOptions& opts) {
    double soft_ratio = 1.0;
    if (!soft.empty()) {
        int satisfied = 0;
        for (const auto& s : soft) {
            if (constraint_satisfied(c.attributes, s)) ++satisfied;
        }
        soft_ratio = double(satisfied) / double(soft.size());
    }
    double utility = 0.0;
    for (const auto& rule : policies) {
        bool matches = std::all_of(rule.predicate.begin(), rule.predicate.end(),
                                   [&](const Constraint& p) {
                                       return constraint_satisfied(c.attributes, p);
                                   });
        if (matches) utility += rule.utility_delta * opts.utility_scale;
    }
    return opts.w_soft * soft_ratio + utility;
}

namespace {

struct ActionContext {
    std::vector<Constraint> hard;
    std::vector<Constraint> soft;
};

ActionContext split_constraints(const PrimitiveAction& action) {
    ActionContext ctx;
    for (const auto& c : action.constraints) {
        (c.hardness == Hardness::Hard ? ctx.hard : ctx.soft).push_back(c);
    }
    return ctx;
}

// Argmax over candidates satisfying every hard constraint; lexicographic
// node_id tie-break. Returns nullopt when no candidate survives.
std::optional<Candidate> select_best(const std::vector<Candidate>& universe,
                                     const std::vector<Constraint>& hard,
                                     const std::vector<Constraint>& soft,
                                     const std::vector<PolicyRule>& policies,
                                     const MediateOptions& opts) {
    const Candidate* best = nullptr;
    double best_score = 0.0;
    for (const auto& c : universe) {
        bool ok = std::all_of(hard.begin(), hard.end(), [&](const Constraint& h) {
            return constraint_satisfied(c.attributes, h);
        });
        if (!ok) continue;
        double score = candidate_score(c, soft, policies, opts);
        if (!best || score > best_score || (score == best_score && c.node_id < best->node_id)) {
            best = &c;
            best_score = score;
        }
    }
    if (!best) return std::nullopt;
    return *best;
}

// Hard constraints no surviving candidate can satisfy: those violated by
// every candidate, or all of them when the universe is empty.
std::vector<Constraint> blocking_constraints(const std::vector<Candidate>& universe,
                                             const std::vector<Constraint>& hard) {
    if (universe.empty()) return hard;
    std::vector<Constraint> out;
    for (const auto& h : hard) {
        bool satisfiable = std::any_of(universe.begin(), universe.end(), [&](const Candidate& c) {
            return constraint_satisfied(c.attributes, h);
        });
        if (!satisfiable) out.push_back(h);
    }
    if (out.empty()) out = hard;  // jointly unsatisfiable
    return out;
}

int find_ttl(const std::vector<Constraint>& hard) {
    for (const auto& c : hard) {
        if (c.key == "ttl" && c.comparator == Comparator::Eq && c.value.is_quantity()) {
            return static_cast<int>(std::get<Quantity>(c.value.v).number);
        }
    }
    return 1;
}

}  // namespace

MediationOutcome mediate(const ReificationPlan& plan, const simnet::Topology& snapshot,
                         const std::vector<PolicyRule>& policies_in,
                         const std::string& requester,
                         simnet::MulticastAllocator* allocator, const MediateOptions& opts) {
    std::vector<PolicyRule> policies = policies_in;
    std::stable_sort(policies.begin(), policies.end(),
                     [](const PolicyRule& a, const PolicyRule& b) {
                         if (a.priority != b.priority) return a.priority < b.priority;
                         return a.stakeholder_id < b.stakeholder_id;
                     });

    MediationOutcome outcome;
    for (const auto& action : plan.actions) {
        outcome.hard_total += static_cast<int>(split_constraints(action).hard.size());
        outcome.soft_total += static_cast<int>(split_constraints(action).soft.size());
    }

    auto fail = [&outcome](std::vector<Constraint> unsatisfied) {
        outcome.kind = OutcomeKind::Failed;
        outcome.unsatisfied = std::move(unsatisfied);
        return outcome;
    };

    // Bound candidates of a referenced action; resources resolve to none.
    auto resolved_candidates = [&outcome](const SubjectLink& link) {
        std::vector<Candidate> out;
        if (link.is_ref()) {
            auto it = outcome.bindings.find(link.ref());
            if (it != outcome.bindings.end()) {
                for (const auto& b : it->second) {
                    if (b.candidate) out.push_back(*b.candidate);
                }
            }
        }
        return out;
    };

    for (ActionRef idx = 0; idx < static_cast<ActionRef>(plan.actions.size()); ++idx) {
        const PrimitiveAction& action = plan.actions[idx];
        ActionContext ctx = split_constraints(action);

        switch (action.kind) {
            case ActionKind::Discover:
            case ActionKind::Connect: {
                auto universe = simnet::match_candidates(snapshot, action.name, requester,
                                                         opts.scope_subnet);

                // Multiple hard equality constraints on one identity-like key
                // (UC1's userID list) discover a set: one binding per value.
                std::map<std::string, int> eq_counts;
                for (const auto& h : ctx.hard) {
                    if (h.comparator == Comparator::Eq) ++eq_counts[h.key];
                }
                std::vector<const Constraint*> multi;
                std::vector<Constraint> shared_hard;
                for (const auto& h : ctx.hard) {
                    if (h.comparator == Comparator::Eq && eq_counts[h.key] > 1) {
                        multi.push_back(&h);
                    } else {
                        shared_hard.push_back(h);
                    }
                }

                std::vector<Binding> bound;
                if (multi.empty()) {
                    auto best = select_best(universe, ctx.hard, ctx.soft, policies, opts);
                    if (!best) return fail(blocking_constraints(universe, ctx.hard));
                    bound.push_back(Binding{std::move(best), std::nullopt});
                } else {
                    for (const Constraint* req : multi) {
                        std::vector<Constraint> hard = shared_hard;
                        hard.push_back(*req);
                        auto best = select_best(universe, hard, ctx.soft, policies, opts);
                        if (!best) return fail({*req});
                        bound.push_back(Binding{std::move(best), std::nullopt});
                    }
                }
                for (const auto& s : ctx.soft) {
                    bool sat = std::all_of(bound.begin(), bound.end(), [&](const Binding& b) {
                        return constraint_satisfied(b.candidate->attributes, s);
                    });
                    if (sat) ++outcome.soft_satisfied;
                }
                outcome.hard_satisfied += static_cast<int>(ctx.hard.size());
                outcome.bindings[idx] = std::move(bound);
                break;
            }

            case ActionKind::Push:
            case ActionKind::Pull: {
                auto resolved = resolved_candidates(action.link);
                // Constraints on keys the resolved node carries are enforced;
                // unknown keys (auth tokens and the like) are pass-through
                // parameters of the transfer.
                std::vector<Constraint> violated;
                for (const auto& h : ctx.hard) {
                    for (const auto& c : resolved) {
                        if (c.attributes.count(h.key) &&
                            !constraint_satisfied(c.attributes, h)) {
                            violated.push_back(h);
                            break;
                        }
                    }
                }
                if (!violated.empty()) return fail(std::move(violated));
                outcome.hard_satisfied += static_cast<int>(ctx.hard.size());
                for (const auto& s : ctx.soft) {
                    bool sat = std::all_of(resolved.begin(), resolved.end(),
                                           [&](const Candidate& c) {
                                               return !c.attributes.count(s.key) ||
                                                      constraint_satisfied(c.attributes, s);
                                           });
                    if (sat) ++outcome.soft_satisfied;
                }
                if (!resolved.empty()) {
                    std::vector<Binding> bound;
                    for (auto& c : resolved) bound.push_back(Binding{std::move(c), std::nullopt});
                    outcome.bindings[idx] = std::move(bound);
                }
                break;
            }

            case ActionKind::Allocate: {
                std::vector<std::string> members{requester};
                for (const auto& c : resolved_candidates(action.link)) {
                    if (std::find(members.begin(), members.end(), c.node_id) == members.end()) {
                        members.push_back(c.node_id);
                    }
                }
                simnet::MulticastAllocator::Allocation alloc;
                if (allocator && action.name.find("multicast") != std::string::npos) {
                    try {
                        alloc = allocator->allocate(find_ttl(ctx.hard), members);
                    } catch (const std::exception&) {
                        return fail(ctx.hard);
                    }
                } else {
                    alloc.group = action.name;
                    alloc.ttl = find_ttl(ctx.hard);
                    alloc.members = members;
                }
                outcome.hard_satisfied += static_cast<int>(ctx.hard.size());
                outcome.soft_satisfied += static_cast<int>(ctx.soft.size());
                outcome.bindings[idx] = {Binding{std::nullopt, std::move(alloc)}};
                break;
            }

            case ActionKind::Advertize:
            case ActionKind::Regulate: {
                // Constraints describe the advertised service or the traffic
                // match; they parameterize the action rather than filter.
                outcome.hard_satisfied += static_cast<int>(ctx.hard.size());
                outcome.soft_satisfied += static_cast<int>(ctx.soft.size());
                if (action.kind == ActionKind::Regulate) {
                    outcome.installed_rules.push_back(action.regulate_verb + "-rule-" +
                                                      std::to_string(idx));
                }
                break;
            }
        }
    }

    outcome.kind = OutcomeKind::Reified;
    return outcome;
}

std::vector<PolicyRule> policies_from_json(const nlohmann::json& doc) {
    std::vector<PolicyRule> rules;
    for (const auto& jr : doc) {
        PolicyRule rule;
        rule.stakeholder_id = jr.value("stakeholder", std::string());
        rule.utility_delta = jr.value("utility_delta", 0.0);
        rule.priority = jr.value("priority", 0);
        for (const auto& jp : jr.value("predicate", nlohmann::json::array())) {
            Constraint c;
            c.key = jp.at("key").get<std::string>();
            const std::string op = jp.value("comparator", "=");
            if (op == "<") c.comparator = Comparator::Lt;
            else if (op == ">") c.comparator = Comparator::Gt;
            else if (op == "<=") c.comparator = Comparator::Le;
            else if (op == ">=") c.comparator = Comparator::Ge;
            else c.comparator = Comparator::Eq;
            c.value = parse_value(jp.at("value").get<std::string>());
            rule.predicate.push_back(std::move(c));
        }
        rules.push_back(std::move(rule));
    }
    return rules;
}

nlohmann::json outcome_to_json(const MediationOutcome& outcome) {
    nlohmann::json j;
    j["kind"] = outcome_kind_name(outcome.kind);
    nlohmann::json bindings = nlohmann::json::object();
    for (const auto& [ref, bound] : outcome.bindings) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& b : bound) {
            if (b.candidate) {
                arr.push_back({{"node", b.candidate->node_id},
                               {"service", b.candidate->service_name}});
            } else if (b.resource) {
                arr.push_back({{"group", b.resource->group},
                               {"ttl", b.resource->ttl},
                               {"members", b.resource->members}});
            }
        }
        bindings[std::to_string(ref)] = std::move(arr);
    }
    j["bindings"] = std::move(bindings);
    if (outcome.kind == OutcomeKind::Failed) {
        nlohmann::json unsat = nlohmann::json::array();
        for (const auto& c : outcome.unsatisfied) {
            unsat.push_back(c.key + comparator_text(c.comparator) + render_value(c.value));
        }
        j["unsatisfied"] = std::move(unsat);
    }
    if (!outcome.reason.empty()) j["reason"] = outcome.reason;
    if (!outcome.installed_rules.empty()) j["installed_rules"] = outcome.installed_rules;
    j["hard_total"] = outcome.hard_total;
    j["hard_satisfied"] = outcome.hard_satisfied;
    j["soft_total"] = outcome.soft_total;
    j["soft_satisfied"] = outcome.soft_satisfied;
    j["score"] = outcome.session_score();
    return j;
}

}  // namespace maat
