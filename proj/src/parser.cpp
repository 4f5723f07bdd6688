#include "maat/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace maat {

namespace {

bool is_atom_break(char c, int paren_depth) {
    if (c == '<' || c == '>' || c == '(' || c == ')' || c == ',' || c == '&') return true;
    if (paren_depth > 0 && c == '=') return true;
    return std::isspace(static_cast<unsigned char>(c));
}

void locate(const std::string& source, std::size_t offset, int& line, int& column) {
    line = 1;
    column = 1;
    for (std::size_t i = 0; i < offset && i < source.size(); ++i) {
        if (source[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
}

ParseDiagnostic make_diag(const std::string& source, std::size_t offset, std::string message) {
    ParseDiagnostic d;
    d.offset = std::min(offset, source.size());
    d.message = std::move(message);
    locate(source, d.offset, d.line, d.column);
    return d;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool valid_verb(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-';
    });
}

}  // namespace

TokenizeResult tokenize(const std::string& source) {
    TokenizeResult result;
    int paren_depth = 0;
    std::size_t i = 0;
    while (i < source.size()) {
        char c = source[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::iscntrl(static_cast<unsigned char>(c))) {
            result.diagnostics.push_back(
                make_diag(source, i, "illegal control character in input"));
            return result;
        }
        Token tok;
        tok.offset = i;
        switch (c) {
            case '<':
                if (paren_depth > 0) {
                    tok.kind = TokenKind::Comparator;
                    tok.text = (i + 1 < source.size() && source[i + 1] == '=') ? "<=" : "<";
                    i += tok.text.size();
                } else {
                    tok.kind = TokenKind::LAngle;
                    tok.text = "<";
                    ++i;
                }
                break;
            case '>':
                if (paren_depth > 0) {
                    tok.kind = TokenKind::Comparator;
                    tok.text = (i + 1 < source.size() && source[i + 1] == '=') ? ">=" : ">";
                    i += tok.text.size();
                } else {
                    tok.kind = TokenKind::RAngle;
                    tok.text = ">";
                    ++i;
                }
                break;
            case '=':
                if (paren_depth > 0) {
                    tok.kind = TokenKind::Comparator;
                    tok.text = "=";
                    ++i;
                    break;
                }
                [[fallthrough]];
            case '(':
                if (c == '(') {
                    tok.kind = TokenKind::LParen;
                    tok.text = "(";
                    ++paren_depth;
                    ++i;
                    break;
                }
                [[fallthrough]];
            default: {
                if (c == ')') {
                    tok.kind = TokenKind::RParen;
                    tok.text = ")";
                    paren_depth = std::max(0, paren_depth - 1);
                    ++i;
                } else if (c == ',') {
                    tok.kind = TokenKind::Comma;
                    tok.text = ",";
                    ++i;
                } else if (c == '&') {
                    tok.kind = TokenKind::Amp;
                    tok.text = "&";
                    ++i;
                } else {
                    std::size_t start = i;
                    while (i < source.size() && !is_atom_break(source[i], paren_depth)) {
                        if (std::iscntrl(static_cast<unsigned char>(source[i]))) {
                            result.diagnostics.push_back(make_diag(
                                source, i, "illegal control character in input"));
                            return result;
                        }
                        ++i;
                    }
                    tok.kind = TokenKind::Atom;
                    tok.text = source.substr(start, i - start);
                }
                break;
            }
        }
        result.tokens.push_back(std::move(tok));
    }
    if (paren_depth > 0) {
        result.diagnostics.push_back(
            make_diag(source, source.size(), "unterminated modifier: missing ')'"));
    }
    Token end;
    end.kind = TokenKind::End;
    end.offset = source.size();
    result.tokens.push_back(end);
    return result;
}

namespace {

// Recursive-descent parser over the token stream. Bails on the first syntax
// error; validation collects multiple errors later.
class Parser {
  public:
    Parser(const std::string& source, std::vector<Token> tokens, const ParseOptions& opts)
        : source_(source), tokens_(std::move(tokens)), opts_(opts) {}

    ParseResult run() {
        auto intent = parse_intent(1);
        if (!failed_) {
            if (peek().kind != TokenKind::End) {
                fail(peek().offset, "trailing input after intent");
            }
        }
        if (failed_) return ParseResult{std::move(diags_)};
        return ParseResult{std::move(intent)};
    }

  private:
    struct Element {
        enum Kind { Null, Identifier, Clause, Intent } kind;
        std::string identifier;
        ModifierClause clause;
        IntentExpr intent;
        std::size_t offset;
    };

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    bool expect(TokenKind kind, const char* what) {
        if (peek().kind != kind) {
            fail(peek().offset, std::string("expected ") + what);
            return false;
        }
        advance();
        return true;
    }

    void fail(std::size_t offset, std::string message) {
        if (!failed_) diags_.push_back(make_diag(source_, offset, std::move(message)));
        failed_ = true;
    }

    IntentExpr parse_intent(int depth) {
        IntentExpr intent;
        if (depth > opts_.max_depth) {
            fail(peek().offset, "nesting depth exceeds maximum of " +
                                    std::to_string(opts_.max_depth));
            return intent;
        }
        if (!expect(TokenKind::LAngle, "'<'")) return intent;
        if (peek().kind != TokenKind::Atom) {
            fail(peek().offset, "expected verb");
            return intent;
        }
        const Token& verb_tok = advance();
        intent.verb = to_lower(verb_tok.text);
        if (!valid_verb(intent.verb)) {
            fail(verb_tok.offset, "invalid verb '" + verb_tok.text + "'");
            return intent;
        }
        if (!expect(TokenKind::Comma, "','")) return intent;
        if (peek().kind != TokenKind::Atom) {
            fail(peek().offset, "expected object");
            return intent;
        }
        intent.object = advance().text;

        std::vector<Element> elements;
        while (!failed_ && peek().kind == TokenKind::Comma) {
            advance();
            elements.push_back(parse_element(depth));
        }
        if (failed_) return intent;
        if (!expect(TokenKind::RAngle, "'>'")) return intent;

        // The last element is the subject; everything before it is a
        // modifier clause slot (NULL meaning an empty slot).
        if (!elements.empty()) {
            Element last = std::move(elements.back());
            elements.pop_back();
            for (auto& el : elements) {
                switch (el.kind) {
                    case Element::Clause:
                        intent.modifiers.push_back(std::move(el.clause));
                        break;
                    case Element::Null:
                        break;  // empty modifier slot
                    default:
                        fail(el.offset, "subject must be the last element");
                        return intent;
                }
            }
            switch (last.kind) {
                case Element::Null:
                    break;
                case Element::Identifier:
                    intent.subject->v = std::move(last.identifier);
                    break;
                case Element::Intent:
                    intent.subject->v = std::move(last.intent);
                    break;
                case Element::Clause:
                    fail(last.offset, "expected subject after modifiers");
                    return intent;
            }
        }
        return intent;
    }

    Element parse_element(int depth) {
        Element el;
        el.offset = peek().offset;
        switch (peek().kind) {
            case TokenKind::LAngle:
                el.kind = Element::Intent;
                el.intent = parse_intent(depth + 1);
                break;
            case TokenKind::LParen:
                el.kind = Element::Clause;
                el.clause = parse_clause();
                break;
            case TokenKind::Atom: {
                const Token& tok = advance();
                if (iequals(tok.text, "NULL")) {
                    el.kind = Element::Null;
                } else {
                    el.kind = Element::Identifier;
                    el.identifier = tok.text;
                }
                break;
            }
            default:
                el.kind = Element::Null;
                fail(peek().offset, "expected modifier, subject, or NULL");
                break;
        }
        return el;
    }

    ModifierClause parse_clause() {
        ModifierClause clause;
        clause.atoms.push_back(parse_mod());
        while (!failed_ && peek().kind == TokenKind::Amp) {
            advance();
            clause.atoms.push_back(parse_mod());
        }
        return clause;
    }

    ModifierAtom parse_mod() {
        ModifierAtom atom;
        if (!expect(TokenKind::LParen, "'('")) return atom;
        if (peek().kind != TokenKind::Atom) {
            fail(peek().offset, "expected modifier key");
            return atom;
        }
        atom.key = advance().text;
        if (peek().kind != TokenKind::Comparator) {
            fail(peek().offset, "expected comparator");
            return atom;
        }
        const std::string op = advance().text;
        if (op == "=") atom.comparator = Comparator::Eq;
        else if (op == "<") atom.comparator = Comparator::Lt;
        else if (op == ">") atom.comparator = Comparator::Gt;
        else if (op == "<=") atom.comparator = Comparator::Le;
        else atom.comparator = Comparator::Ge;
        if (peek().kind != TokenKind::Atom) {
            fail(peek().offset, "expected modifier value");
            return atom;
        }
        atom.value = parse_value(advance().text);
        if (peek().kind == TokenKind::Comma) {
            advance();
            if (peek().kind != TokenKind::Atom) {
                fail(peek().offset, "expected priority tag");
                return atom;
            }
            const Token& tag = advance();
            if (iequals(tag.text, "essential")) {
                atom.priority = Priority::Essential;
            } else if (iequals(tag.text, "desirable")) {
                atom.priority = Priority::Desirable;
            } else {
                fail(tag.offset, "unknown priority tag '" + tag.text + "'");
                return atom;
            }
        }
        expect(TokenKind::RParen, "')'");
        return atom;
    }

    const std::string& source_;
    std::vector<Token> tokens_;
    ParseOptions opts_;
    std::size_t pos_ = 0;
    bool failed_ = false;
    std::vector<ParseDiagnostic> diags_;
};

}  // namespace

ParseResult parse(const std::string& source, const ParseOptions& opts) {
    TokenizeResult lexed = tokenize(source);
    if (!lexed.ok()) return ParseResult{std::move(lexed.diagnostics)};
    Parser parser(source, std::move(lexed.tokens), opts);
    return parser.run();
}

std::string render(const IntentExpr& intent) {
    std::ostringstream out;
    out << '<' << intent.verb << ", " << intent.object;
    for (const auto& clause : intent.modifiers) {
        out << ", ";
        bool first = true;
        for (const auto& atom : clause.atoms) {
            if (!first) out << '&';
            first = false;
            out << '(' << atom.key << comparator_text(atom.comparator)
                << render_value(atom.value) << ','
                << (atom.priority == Priority::Essential ? "essential" : "desirable") << ')';
        }
    }
    out << ", ";
    if (intent.subject->is_null()) {
        out << "NULL";
    } else if (intent.subject->is_identifier()) {
        out << intent.subject->identifier();
    } else {
        out << render(intent.subject->nested());
    }
    out << '>';
    return out.str();
}

}  // namespace maat
