#include "maat/content_ref.hpp"

#include <algorithm>
#include <cctype>

namespace maat {

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_hex40(const std::string& s) {
    return s.size() == 40 &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isxdigit(c); });
}

std::vector<std::string> split_slash(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto slash = s.find('/', pos);
        if (slash == std::string::npos) {
            parts.push_back(s.substr(pos));
            break;
        }
        parts.push_back(s.substr(pos, slash - pos));
        pos = slash + 1;
    }
    return parts;
}

}  // namespace

const char* ContentRef::variant_name() const {
    if (is_url()) return "url";
    if (is_ccn()) return "ccn";
    if (is_info_hash()) return "info_hash";
    return "opaque";
}

ContentRef classify(const std::string& raw) {
    auto scheme_sep = raw.find("://");
    if (scheme_sep != std::string::npos) {
        UrlRef url;
        url.scheme = raw.substr(0, scheme_sep);
        std::size_t rest = scheme_sep + 3;
        auto path_start = raw.find('/', rest);
        if (path_start == std::string::npos) {
            url.authority = raw.substr(rest);
        } else {
            url.authority = raw.substr(rest, path_start - rest);
            url.path = raw.substr(path_start);
        }
        return ContentRef{std::move(url)};
    }
    if (is_hex40(raw)) return ContentRef{InfoHashRef{raw}};
    if (raw.find('/') != std::string::npos) {
        auto parts = split_slash(raw);
        bool nonempty = std::all_of(parts.begin(), parts.end(),
                                    [](const std::string& p) { return !p.empty(); });
        if (nonempty && !parts.empty() && parts[0].find('.') != std::string::npos) {
            return ContentRef{CcnNameRef{std::move(parts)}};
        }
    }
    return ContentRef{OpaqueRef{raw}};
}

std::string normalize(const ContentRef& ref) {
    if (auto* url = std::get_if<UrlRef>(&ref.v)) {
        return to_lower(url->scheme) + "://" + to_lower(url->authority) + url->path;
    }
    if (auto* ccn = std::get_if<CcnNameRef>(&ref.v)) {
        std::string out;
        for (std::size_t i = 0; i < ccn->components.size(); ++i) {
            if (i) out += '/';
            out += ccn->components[i];
        }
        return out;
    }
    if (auto* hash = std::get_if<InfoHashRef>(&ref.v)) return to_lower(hash->hex);
    return std::get<OpaqueRef>(ref.v).text;
}

}  // namespace maat
