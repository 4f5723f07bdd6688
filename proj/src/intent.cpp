#include "maat/intent.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace maat {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool all_alpha(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c); });
}

}  // namespace

std::optional<Cidr> parse_cidr(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return std::nullopt;
    std::string_view addr(text.data(), slash);
    std::string_view prefix(text.data() + slash + 1, text.size() - slash - 1);
    if (!all_digits(prefix) || prefix.size() > 2) return std::nullopt;
    int plen = 0;
    std::from_chars(prefix.data(), prefix.data() + prefix.size(), plen);
    if (plen < 0 || plen > 32) return std::nullopt;

    std::uint32_t packed = 0;
    int octets = 0;
    std::size_t pos = 0;
    while (pos <= addr.size()) {
        auto dot = addr.find('.', pos);
        std::string_view part = addr.substr(pos, dot == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : dot - pos);
        if (!all_digits(part) || part.size() > 3) return std::nullopt;
        int octet = 0;
        std::from_chars(part.data(), part.data() + part.size(), octet);
        if (octet > 255) return std::nullopt;
        packed = (packed << 8) | static_cast<std::uint32_t>(octet);
        ++octets;
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    if (octets != 4) return std::nullopt;
    return Cidr{packed, plen};
}

std::string render_cidr(const Cidr& c) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u/%d", (c.address >> 24) & 0xff,
                  (c.address >> 16) & 0xff, (c.address >> 8) & 0xff, c.address & 0xff,
                  c.prefix_len);
    return buf;
}

TypedValue parse_value(const std::string& atom) {
    if (auto cidr = parse_cidr(atom)) return TypedValue{*cidr};

    // Quantity: optional sign, digits, optional fraction, optional pure-alpha
    // unit. "92cd701c0be" fails (unit contains digits) and stays text.
    std::size_t i = 0;
    if (i < atom.size() && atom[i] == '-') ++i;
    std::size_t digits_start = i;
    while (i < atom.size() && std::isdigit(static_cast<unsigned char>(atom[i]))) ++i;
    if (i > digits_start) {
        std::size_t int_end = i;
        if (i < atom.size() && atom[i] == '.') {
            ++i;
            std::size_t frac_start = i;
            while (i < atom.size() && std::isdigit(static_cast<unsigned char>(atom[i]))) ++i;
            if (i == frac_start) i = int_end;  // trailing dot: not a number
        }
        std::string_view unit(atom.data() + i, atom.size() - i);
        if (all_alpha(unit)) {
            double number = 0.0;
            std::from_chars(atom.data(), atom.data() + i, number);
            return TypedValue{Quantity{number, std::string(unit)}};
        }
    }
    return TypedValue{atom};
}

std::string render_value(const TypedValue& value) {
    if (auto* q = std::get_if<Quantity>(&value.v)) {
        std::ostringstream out;
        if (q->number == std::floor(q->number) && std::abs(q->number) < 1e15) {
            out << static_cast<long long>(q->number);
        } else {
            out << q->number;
        }
        out << q->unit;
        return out.str();
    }
    if (auto* c = std::get_if<Cidr>(&value.v)) return render_cidr(*c);
    return std::get<std::string>(value.v);
}

std::string comparator_text(Comparator c) {
    switch (c) {
        case Comparator::Eq: return "=";
        case Comparator::Lt: return "<";
        case Comparator::Gt: return ">";
        case Comparator::Le: return "<=";
        case Comparator::Ge: return ">=";
    }
    return "=";
}

IntentExpr::IntentExpr() : subject(std::make_unique<SubjectExpr>()) {}

IntentExpr::~IntentExpr() = default;

IntentExpr::IntentExpr(const IntentExpr& other)
    : verb(other.verb),
      object(other.object),
      modifiers(other.modifiers),
      subject(std::make_unique<SubjectExpr>(*other.subject)) {}

IntentExpr& IntentExpr::operator=(const IntentExpr& other) {
    if (this != &other) {
        verb = other.verb;
        object = other.object;
        modifiers = other.modifiers;
        subject = std::make_unique<SubjectExpr>(*other.subject);
    }
    return *this;
}

bool IntentExpr::operator==(const IntentExpr& other) const {
    return verb == other.verb && object == other.object && modifiers == other.modifiers &&
           *subject == *other.subject;
}

int IntentExpr::sentence_count() const {
    int n = 1;
    if (subject->is_nested()) n += subject->nested().sentence_count();
    return n;
}

int IntentExpr::depth() const {
    int d = 1;
    if (subject->is_nested()) d += subject->nested().depth();
    return d;
}

}  // namespace maat
