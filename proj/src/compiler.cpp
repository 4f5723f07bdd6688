#include "maat/plan.hpp"

#include <cstdint>
#include <cstdio>

namespace maat {

const char* action_kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::Discover: return "discover";
        case ActionKind::Advertize: return "advertize";
        case ActionKind::Connect: return "connect";
        case ActionKind::Push: return "push";
        case ActionKind::Pull: return "pull";
        case ActionKind::Allocate: return "allocate";
        case ActionKind::Regulate: return "regulate";
    }
    return "discover";
}

namespace {

std::vector<Constraint> lower_modifiers(const IntentExpr& intent) {
    std::vector<Constraint> out;
    for (const auto& clause : intent.modifiers) {
        for (const auto& atom : clause.atoms) {
            out.push_back({atom.key, atom.comparator, atom.value,
                           atom.priority == Priority::Essential ? Hardness::Hard
                                                                : Hardness::Soft});
        }
    }
    return out;
}

// Emits the subtree rooted at `intent` and returns the index of its root
// action. Subjects are emitted first so every link points backward.
ActionRef emit(const IntentExpr& intent, ReificationPlan& plan) {
    SubjectLink link;
    if (intent.subject->is_nested()) {
        link.v = emit(intent.subject->nested(), plan);
    } else if (intent.subject->is_identifier()) {
        link.v = intent.subject->identifier();
    }

    PrimitiveAction action;
    action.name = intent.object;
    action.constraints = lower_modifiers(intent);
    action.link = link;

    if (intent.verb == "discover") {
        action.kind = ActionKind::Discover;
    } else if (intent.verb == "advertize") {
        action.kind = ActionKind::Advertize;
    } else if (intent.verb == "connect") {
        action.kind = ActionKind::Connect;
    } else if (intent.verb == "push") {
        action.kind = ActionKind::Push;
        // An outer push targeting a completed push announces availability
        // of already-placed content.
        if (link.is_ref() && plan.actions[link.ref()].kind == ActionKind::Push) {
            action.announce = true;
        }
    } else if (intent.verb == "pull") {
        action.kind = ActionKind::Pull;
    } else if (intent.verb == "allocate") {
        action.kind = ActionKind::Allocate;
    } else if (intent.verb == "prioritize" || intent.verb == "block") {
        action.kind = ActionKind::Regulate;
        action.regulate_verb = intent.verb;
    } else {
        // Registered extension verbs lower by category via Discover-like
        // matching; without a category they default to Discover semantics.
        action.kind = ActionKind::Discover;
    }

    plan.actions.push_back(std::move(action));
    return static_cast<ActionRef>(plan.actions.size() - 1);
}

}  // namespace

ReificationPlan compile(const IntentExpr& intent, const OntologyRegistry& reg) {
    auto errors = validate_intent(intent, reg);
    if (!errors.empty()) {
        throw CompileError("cannot compile invalid intent: " + errors.front().message);
    }
    ReificationPlan plan;
    plan.root = emit(intent, plan);
    return plan;
}

const std::vector<Constraint>& plan_constraints(const ReificationPlan& plan, ActionRef ref) {
    if (ref < 0 || ref >= static_cast<ActionRef>(plan.actions.size())) {
        throw std::out_of_range("action reference out of range");
    }
    return plan.actions[ref].constraints;
}

nlohmann::json plan_to_json(const ReificationPlan& plan) {
    nlohmann::json actions = nlohmann::json::array();
    for (std::size_t i = 0; i < plan.actions.size(); ++i) {
        const auto& a = plan.actions[i];
        nlohmann::json j;
        j["index"] = i;
        j["kind"] = action_kind_name(a.kind);
        j["name"] = a.name;
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& c : a.constraints) {
            cs.push_back({{"key", c.key},
                          {"comparator", comparator_text(c.comparator)},
                          {"value", render_value(c.value)},
                          {"hardness", c.hardness == Hardness::Hard ? "hard" : "soft"}});
        }
        j["constraints"] = std::move(cs);
        if (a.link.is_ref()) {
            j["link"] = {{"ref", a.link.ref()}};
        } else if (a.link.is_identifier()) {
            j["link"] = {{"identifier", a.link.identifier()}};
        } else {
            j["link"] = nullptr;
        }
        if (a.kind == ActionKind::Push) j["announce"] = a.announce;
        if (a.kind == ActionKind::Regulate) j["regulate_verb"] = a.regulate_verb;
        actions.push_back(std::move(j));
    }
    return nlohmann::json{{"actions", actions}, {"root", plan.root}};
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string plan_digest(const ReificationPlan& plan) {
    return fnv1a_hex(plan_to_json(plan).dump());
}

}  // namespace maat
