#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maat/plan.hpp"
#include "maat/simnet/topology.hpp"

namespace maat {

// An operator/stakeholder policy. When every predicate constraint matches a
// candidate's attributes, utility_delta is added to that candidate's score.
struct PolicyRule {
    std::string stakeholder_id;
    std::vector<Constraint> predicate;
    double utility_delta = 0.0;
    int priority = 0;
};

// Did one TypedValue satisfy "cmp value"? Quantities compare numerically
// when units agree (an empty unit matches anything); CIDR equality means
// containment of the candidate's network in the constraint's.
bool value_satisfies(const TypedValue& attr, Comparator cmp, const TypedValue& want);

// Any of the attribute's values may satisfy the constraint.
bool constraint_satisfied(const simnet::AttrMap& attrs, const Constraint& c);

struct Binding {
    // Either a selected candidate or an allocated resource.
    std::optional<simnet::Candidate> candidate;
    std::optional<simnet::MulticastAllocator::Allocation> resource;
};

enum class OutcomeKind { Reified, NonIdnFallback, Failed };

const char* outcome_kind_name(OutcomeKind k);

struct MediationOutcome {
    OutcomeKind kind = OutcomeKind::Failed;
    std::map<ActionRef, std::vector<Binding>> bindings;
    std::vector<Constraint> unsatisfied;     // Failed: blocking hard constraints
    std::string reason;                      // NonIdnFallback
    std::vector<std::string> installed_rules;  // Regulate acknowledgments
    int hard_total = 0;
    int hard_satisfied = 0;
    int soft_total = 0;
    int soft_satisfied = 0;

    double session_score() const {
        if (kind != OutcomeKind::Reified) return 0.0;
        return soft_total == 0 ? 1.0 : double(soft_satisfied) / double(soft_total);
    }
};

struct MediateOptions {
    double w_soft = 1.0;
    double utility_scale = 1.0;  // multiplies every policy utility_delta
    std::string scope_subnet;    // restrict the candidate universe to a subtree
};

// Candidate score under soft constraints and policies:
//   w_soft * (satisfied soft / total soft, 1 if none) + sum of matching deltas.
double candidate_score(const simnet::Candidate& c, const std::vector<Constraint>& soft,
                       const std::vector<PolicyRule>& policies, const MediateOptions& opts);

// Matches a plan against an immutable topology snapshot. The allocator, when
// given, grants multicast groups for Allocate actions.
MediationOutcome mediate(const ReificationPlan& plan, const simnet::Topology& snapshot,
                         const std::vector<PolicyRule>& policies,
                         const std::string& requester,
                         simnet::MulticastAllocator* allocator = nullptr,
                         const MediateOptions& opts = {});

std::vector<PolicyRule> policies_from_json(const nlohmann::json& doc);
nlohmann::json outcome_to_json(const MediationOutcome& outcome);

}  // namespace maat
