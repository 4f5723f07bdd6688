#pragma once

#include <string>
#include <variant>
#include <vector>

namespace maat {

// The content reference forms a Transfer object may take: a URL, a CCN-style
// hierarchical name, a BitTorrent info-hash, or an opaque identifier.
struct UrlRef {
    std::string scheme;
    std::string authority;
    std::string path;  // includes leading '/' when present

    bool operator==(const UrlRef&) const = default;
};

struct CcnNameRef {
    std::vector<std::string> components;  // >= 1, non-empty

    bool operator==(const CcnNameRef&) const = default;
};

struct InfoHashRef {
    std::string hex;  // exactly 40 hex chars

    bool operator==(const InfoHashRef&) const = default;
};

struct OpaqueRef {
    std::string text;

    bool operator==(const OpaqueRef&) const = default;
};

struct ContentRef {
    std::variant<UrlRef, CcnNameRef, InfoHashRef, OpaqueRef> v;

    bool is_url() const { return std::holds_alternative<UrlRef>(v); }
    bool is_ccn() const { return std::holds_alternative<CcnNameRef>(v); }
    bool is_info_hash() const { return std::holds_alternative<InfoHashRef>(v); }
    bool is_opaque() const { return std::holds_alternative<OpaqueRef>(v); }

    const char* variant_name() const;
};

// Total, deterministic classification. Precedence: "://" -> Url; 40 hex
// chars -> InfoHash; '/'-separated with a dotted first component -> CcnName;
// otherwise Opaque.
ContentRef classify(const std::string& raw);

// Canonical text: lowercase hash hex, lowercase URL scheme/authority,
// CCN components joined by '/'. Variant-stable under re-classification.
std::string normalize(const ContentRef& ref);

}  // namespace maat
