#pragma once

#include <nlohmann/json.hpp>

#include "maat/intent.hpp"

namespace maat {

// Canonical JSON form of an intent AST, used by the CLI and wire protocol.
nlohmann::json ast_to_json(const IntentExpr& intent);

}  // namespace maat
