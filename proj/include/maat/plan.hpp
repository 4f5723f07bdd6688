#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "maat/intent.hpp"
#include "maat/ontology.hpp"

namespace maat {

enum class Hardness { Hard, Soft };

// A lowered modifier: Essential maps to Hard, Desirable to Soft.
struct Constraint {
    std::string key;
    Comparator comparator = Comparator::Eq;
    TypedValue value;
    Hardness hardness = Hardness::Hard;

    bool operator==(const Constraint&) const = default;
};

enum class ActionKind { Discover, Advertize, Connect, Push, Pull, Allocate, Regulate };

const char* action_kind_name(ActionKind k);

using ActionRef = int;

// Link from an action to its subject: a backward reference into the plan,
// a literal identifier, or nothing.
struct SubjectLink {
    std::variant<std::monostate, ActionRef, std::string> v;

    bool is_none() const { return std::holds_alternative<std::monostate>(v); }
    bool is_ref() const { return std::holds_alternative<ActionRef>(v); }
    bool is_identifier() const { return std::holds_alternative<std::string>(v); }
    ActionRef ref() const { return std::get<ActionRef>(v); }
    const std::string& identifier() const { return std::get<std::string>(v); }

    bool operator==(const SubjectLink&) const = default;
};

struct PrimitiveAction {
    ActionKind kind = ActionKind::Discover;
    // service name / content reference / resource kind / peer spec /
    // traffic spec, depending on kind.
    std::string name;
    std::vector<Constraint> constraints;
    // Discover: payload to deliver; Push/Connect: target; Pull: source;
    // Allocate: the action the resource covers.
    SubjectLink link;
    bool announce = false;            // Push announcing already-placed content
    std::string regulate_verb;        // "prioritize" or "block" for Regulate

    bool operator==(const PrimitiveAction&) const = default;
};

struct ReificationPlan {
    std::vector<PrimitiveAction> actions;  // topologically ordered, subject first
    ActionRef root = 0;
};

class CompileError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Lowers a validated intent into an ordered plan, innermost subject first.
// Throws CompileError if the intent fails ontology validation.
ReificationPlan compile(const IntentExpr& intent, const OntologyRegistry& reg);

// The action's own constraints; modifiers never flow across nesting levels.
const std::vector<Constraint>& plan_constraints(const ReificationPlan& plan, ActionRef ref);

nlohmann::json plan_to_json(const ReificationPlan& plan);

// Stable content digest of the canonical plan JSON (FNV-1a 64, hex).
std::string plan_digest(const ReificationPlan& plan);

std::string fnv1a_hex(const std::string& data);

}  // namespace maat
