#pragma once

#include <string>
#include <variant>
#include <vector>

#include "maat/intent.hpp"

namespace maat {

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    std::size_t offset = 0;
    int line = 1;
    int column = 1;
    std::string message;
    Severity severity = Severity::Error;
};

struct ParseOptions {
    int max_depth = 8;
};

// Token kinds produced by the lexer. Comparator characters are delimiters
// only inside parentheses; atoms elsewhere may contain ':', '/', '.', '='.
enum class TokenKind {
    LAngle,
    RAngle,
    LParen,
    RParen,
    Comma,
    Amp,
    Comparator,
    Atom,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    std::size_t offset = 0;
};

struct TokenizeResult {
    std::vector<Token> tokens;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

TokenizeResult tokenize(const std::string& source);

struct ParseResult {
    std::variant<IntentExpr, std::vector<ParseDiagnostic>> v;

    bool ok() const { return std::holds_alternative<IntentExpr>(v); }
    const IntentExpr& intent() const { return std::get<IntentExpr>(v); }
    const std::vector<ParseDiagnostic>& diagnostics() const {
        return std::get<std::vector<ParseDiagnostic>>(v);
    }
};

ParseResult parse(const std::string& source, const ParseOptions& opts = {});

// Canonical rendering: single space after top-level commas, no spaces inside
// modifiers, lowercase verbs/tags, priority tags always explicit.
std::string render(const IntentExpr& intent);

}  // namespace maat
