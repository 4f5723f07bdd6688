#include "maat/ontology.hpp"

#include <algorithm>

namespace maat {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

const std::set<SubjectKind> kAnySubject = {SubjectKind::Null, SubjectKind::Identifier,
                                           SubjectKind::Nested};

std::string subject_kind_name(SubjectKind k) {
    switch (k) {
        case SubjectKind::Null: return "null";
        case SubjectKind::Identifier: return "identifier";
        case SubjectKind::Nested: return "nested";
    }
    return "null";
}

std::optional<SubjectKind> subject_kind_from_name(const std::string& name) {
    if (name == "null") return SubjectKind::Null;
    if (name == "identifier") return SubjectKind::Identifier;
    if (name == "nested") return SubjectKind::Nested;
    return std::nullopt;
}

}  // namespace

std::string verb_category_name(VerbCategory c) {
    switch (c) {
        case VerbCategory::Construct: return "construct";
        case VerbCategory::Transfer: return "transfer";
        case VerbCategory::Regulate: return "regulate";
    }
    return "construct";
}

std::optional<VerbCategory> verb_category_from_name(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "construct") return VerbCategory::Construct;
    if (n == "transfer") return VerbCategory::Transfer;
    if (n == "regulate") return VerbCategory::Regulate;
    return std::nullopt;
}

std::string object_kind_name(ObjectKind k) {
    switch (k) {
        case ObjectKind::Service: return "service";
        case ObjectKind::Content: return "content";
        case ObjectKind::Resource: return "resource";
        case ObjectKind::TrafficClass: return "traffic_class";
        case ObjectKind::Any: return "any";
    }
    return "any";
}

std::optional<ObjectKind> object_kind_from_name(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "service") return ObjectKind::Service;
    if (n == "content") return ObjectKind::Content;
    if (n == "resource") return ObjectKind::Resource;
    if (n == "traffic_class") return ObjectKind::TrafficClass;
    if (n == "any") return ObjectKind::Any;
    return std::nullopt;
}

std::optional<RegistryError> OntologyRegistry::register_verb(VerbSpec spec) {
    if (frozen_) return RegistryError::FrozenRegistry;
    spec.name = to_lower(spec.name);
    if (verbs_.count(spec.name)) return RegistryError::DuplicateVerb;
    if (spec.subject_allowed.empty()) spec.subject_allowed = kAnySubject;
    verbs_.emplace(spec.name, std::move(spec));
    return std::nullopt;
}

const VerbSpec* OntologyRegistry::lookup(const std::string& name) const {
    auto it = verbs_.find(to_lower(name));
    return it == verbs_.end() ? nullptr : &it->second;
}

std::vector<const VerbSpec*> OntologyRegistry::verbs() const {
    std::vector<const VerbSpec*> out;
    out.reserve(verbs_.size());
    for (const auto& [_, spec] : verbs_) out.push_back(&spec);
    return out;
}

nlohmann::json OntologyRegistry::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [_, spec] : verbs_) {
        nlohmann::json allowed = nlohmann::json::array();
        for (auto k : spec.subject_allowed) allowed.push_back(subject_kind_name(k));
        arr.push_back({{"name", spec.name},
                       {"category", verb_category_name(spec.category)},
                       {"object_kind", object_kind_name(spec.object_kind)},
                       {"subject_allowed", allowed},
                       {"description", spec.description}});
    }
    return nlohmann::json{{"verbs", arr}};
}

OntologyRegistry OntologyRegistry::from_json(const nlohmann::json& doc) {
    OntologyRegistry reg = builtin_ontology();
    for (const auto& entry : doc.at("verbs")) {
        VerbSpec spec;
        spec.name = entry.at("name").get<std::string>();
        if (reg.lookup(spec.name)) continue;  // built-ins win
        auto cat = verb_category_from_name(entry.at("category").get<std::string>());
        if (!cat) throw std::invalid_argument("unknown verb category for " + spec.name);
        spec.category = *cat;
        if (entry.contains("object_kind")) {
            auto kind = object_kind_from_name(entry.at("object_kind").get<std::string>());
            if (!kind) throw std::invalid_argument("unknown object kind for " + spec.name);
            spec.object_kind = *kind;
        }
        if (entry.contains("subject_allowed")) {
            for (const auto& s : entry.at("subject_allowed")) {
                auto k = subject_kind_from_name(s.get<std::string>());
                if (!k) throw std::invalid_argument("unknown subject kind for " + spec.name);
                spec.subject_allowed.insert(*k);
            }
        }
        if (entry.contains("description")) {
            spec.description = entry.at("description").get<std::string>();
        }
        reg.register_verb(std::move(spec));
    }
    return reg;
}

OntologyRegistry builtin_ontology() {
    OntologyRegistry reg;
    auto add = [&reg](std::string name, VerbCategory cat, ObjectKind obj,
                      std::set<SubjectKind> subj, std::string desc) {
        VerbSpec spec;
        spec.name = std::move(name);
        spec.category = cat;
        spec.object_kind = obj;
        spec.subject_allowed = std::move(subj);
        spec.description = std::move(desc);
        reg.builtin_names_.insert(spec.name);
        reg.register_verb(std::move(spec));
    };
    add("connect", VerbCategory::Construct, ObjectKind::Service, kAnySubject,
        "form a connection to another application or peer");
    add("discover", VerbCategory::Construct, ObjectKind::Service, kAnySubject,
        "look for applications or services matching criteria");
    add("advertize", VerbCategory::Construct, ObjectKind::Service,
        {SubjectKind::Null, SubjectKind::Identifier},
        "announce a new service able to serve other intents");
    add("push", VerbCategory::Transfer, ObjectKind::Content, kAnySubject,
        "push content toward a target");
    add("pull", VerbCategory::Transfer, ObjectKind::Content, kAnySubject,
        "pull content from a source");
    add("allocate", VerbCategory::Regulate, ObjectKind::Resource, kAnySubject,
        "allocate a network resource such as a multicast group");
    add("prioritize", VerbCategory::Regulate, ObjectKind::TrafficClass, {SubjectKind::Null},
        "prioritize a class of traffic in the network");
    add("block", VerbCategory::Regulate, ObjectKind::TrafficClass, {SubjectKind::Null},
        "block a class of traffic in the network");
    return reg;
}

namespace {

void validate_rec(const IntentExpr& intent, const OntologyRegistry& reg,
                  const std::string& path, std::vector<ValidationError>& errors) {
    const VerbSpec* spec = reg.lookup(intent.verb);
    if (!spec) {
        errors.push_back({ValidationError::UnknownVerb, intent.verb, path,
                          "unknown verb '" + intent.verb + "'"});
    } else {
        SubjectKind kind = intent.subject->is_null()
                               ? SubjectKind::Null
                               : (intent.subject->is_identifier() ? SubjectKind::Identifier
                                                                  : SubjectKind::Nested);
        if (!spec->subject_allowed.count(kind)) {
            errors.push_back({ValidationError::SubjectKindMismatch, intent.verb, path,
                              "verb '" + intent.verb + "' does not accept a " +
                                  subject_kind_name(kind) + " subject"});
        }
    }
    if (intent.subject->is_nested()) {
        validate_rec(intent.subject->nested(), reg, path + "/subject", errors);
    }
}

}  // namespace

std::vector<ValidationError> validate_intent(const IntentExpr& intent,
                                             const OntologyRegistry& reg) {
    std::vector<ValidationError> errors;
    validate_rec(intent, reg, "", errors);
    return errors;
}

}  // namespace maat
