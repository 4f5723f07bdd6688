#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace maat {

// A typed modifier/attribute value. "50ms" parses as a quantity with unit
// "ms"; "1.2.3.0/24" as a v4 CIDR; anything else stays text.
struct Quantity {
    double number = 0.0;
    std::string unit;  // may be empty

    bool operator==(const Quantity&) const = default;
};

struct Cidr {
    std::uint32_t address = 0;  // network byte order as host integer
    int prefix_len = 0;         // 0..32

    bool operator==(const Cidr&) const = default;
};

struct TypedValue {
    std::variant<Quantity, Cidr, std::string> v;

    bool is_quantity() const { return std::holds_alternative<Quantity>(v); }
    bool is_cidr() const { return std::holds_alternative<Cidr>(v); }
    bool is_text() const { return std::holds_alternative<std::string>(v); }

    bool operator==(const TypedValue&) const = default;
};

// Parses one value atom into its typed form. Total; falls back to text.
TypedValue parse_value(const std::string& atom);

// Canonical textual form; parse_value(render_value(x)) == x.
std::string render_value(const TypedValue& value);

std::string render_cidr(const Cidr& c);
std::optional<Cidr> parse_cidr(const std::string& text);

enum class Priority { Essential, Desirable };

enum class Comparator { Eq, Lt, Gt, Le, Ge };

std::string comparator_text(Comparator c);

struct ModifierAtom {
    std::string key;
    Comparator comparator = Comparator::Eq;
    TypedValue value;
    Priority priority = Priority::Essential;

    bool operator==(const ModifierAtom&) const = default;
};

// One or more atoms joined by '&'. A clause is kept distinct from its
// neighbours so mixed-priority conjunctions survive a round trip.
struct ModifierClause {
    std::vector<ModifierAtom> atoms;  // non-empty

    bool operator==(const ModifierClause&) const = default;
};

struct IntentExpr;

struct SubjectExpr;

struct IntentExpr {
    std::string verb;  // stored lowercase; matched case-insensitively
    std::string object;
    std::vector<ModifierClause> modifiers;
    std::unique_ptr<SubjectExpr> subject;  // never null after parse

    IntentExpr();
    IntentExpr(const IntentExpr& other);
    IntentExpr(IntentExpr&&) noexcept = default;
    IntentExpr& operator=(const IntentExpr& other);
    IntentExpr& operator=(IntentExpr&&) noexcept = default;
    ~IntentExpr();

    bool operator==(const IntentExpr& other) const;

    // Number of <...> sentences including this one.
    int sentence_count() const;
    int depth() const;
};

struct SubjectExpr {
    // Null subject is an empty variant slot.
    std::variant<std::monostate, std::string, IntentExpr> v;

    bool is_null() const { return std::holds_alternative<std::monostate>(v); }
    bool is_identifier() const { return std::holds_alternative<std::string>(v); }
    bool is_nested() const { return std::holds_alternative<IntentExpr>(v); }

    const std::string& identifier() const { return std::get<std::string>(v); }
    const IntentExpr& nested() const { return std::get<IntentExpr>(v); }

    bool operator==(const SubjectExpr& other) const { return v == other.v; }
};

}  // namespace maat
