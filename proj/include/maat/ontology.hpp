#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maat/intent.hpp"

namespace maat {

enum class VerbCategory { Construct, Transfer, Regulate };

enum class ObjectKind { Service, Content, Resource, TrafficClass, Any };

enum class SubjectKind { Null, Identifier, Nested };

std::string verb_category_name(VerbCategory c);
std::string object_kind_name(ObjectKind k);
std::optional<VerbCategory> verb_category_from_name(const std::string& name);
std::optional<ObjectKind> object_kind_from_name(const std::string& name);

struct VerbSpec {
    std::string name;  // lowercase
    VerbCategory category = VerbCategory::Construct;
    ObjectKind object_kind = ObjectKind::Any;
    std::set<SubjectKind> subject_allowed;
    std::string description;
};

struct ValidationError {
    enum Kind { UnknownVerb, SubjectKindMismatch } kind;
    std::string verb;
    std::string path;  // e.g. "/subject/subject"
    std::string message;
};

enum class RegistryError { DuplicateVerb, FrozenRegistry };

class OntologyRegistry {
  public:
    // Adds a verb; built-ins cannot be shadowed or removed.
    std::optional<RegistryError> register_verb(VerbSpec spec);

    const VerbSpec* lookup(const std::string& name) const;

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    std::vector<const VerbSpec*> verbs() const;

    nlohmann::json to_json() const;
    // Merges verbs from a JSON document into this registry.
    static OntologyRegistry from_json(const nlohmann::json& doc);

  private:
    friend OntologyRegistry builtin_ontology();
    std::map<std::string, VerbSpec> verbs_;
    std::set<std::string> builtin_names_;
    bool frozen_ = false;
};

// The built-in verb set: connect/discover/advertize (Construct),
// push/pull (Transfer), allocate/prioritize/block (Regulate).
OntologyRegistry builtin_ontology();

// Recursively checks every verb and subject kind; returns all errors.
std::vector<ValidationError> validate_intent(const IntentExpr& intent,
                                             const OntologyRegistry& reg);

}  // namespace maat
