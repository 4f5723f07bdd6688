#include "maat/ast_json.hpp"

namespace maat {

using nlohmann::json;

json ast_to_json(const IntentExpr& intent) {
    json j;
    j["verb"] = intent.verb;
    j["object"] = intent.object;
    json clauses = json::array();
    for (const auto& clause : intent.modifiers) {
        json atoms = json::array();
        for (const auto& atom : clause.atoms) {
            atoms.push_back({{"key", atom.key},
                             {"comparator", comparator_text(atom.comparator)},
                             {"value", render_value(atom.value)},
                             {"priority", atom.priority == Priority::Essential
                                              ? "essential"
                                              : "desirable"}});
        }
        clauses.push_back(std::move(atoms));
    }
    j["modifiers"] = std::move(clauses);
    if (intent.subject->is_null()) {
        j["subject"] = nullptr;
    } else if (intent.subject->is_identifier()) {
        j["subject"] = intent.subject->identifier();
    } else {
        j["subject"] = ast_to_json(intent.subject->nested());
    }
    return j;
}

}  // namespace maat
