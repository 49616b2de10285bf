#include "plugaudit/url.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "plugaudit/text.hpp"

namespace plugaudit {

namespace {

// Multi-label public suffixes seen in practice; everything else registers at
// the last two labels.
constexpr std::array<std::string_view, 22> kMultiLabelSuffixes = {
    "co.uk",  "org.uk", "ac.uk",  "gov.uk", "com.au", "net.au", "org.au",
    "co.jp",  "ne.jp",  "or.jp",  "co.kr",  "com.br", "com.cn", "com.mx",
    "co.in",  "co.nz",  "com.sg", "com.tr", "com.ar", "co.za",  "github.io",
    "web.app",
};

std::vector<std::string> split_labels(std::string_view host) {
    std::vector<std::string> labels;
    std::string current;
    for (char c : host) {
        if (c == '.') {
            labels.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    labels.push_back(current);
    return labels;
}

std::string join_last_labels(const std::vector<std::string>& labels, std::size_t count) {
    std::string out;
    for (std::size_t i = labels.size() - count; i < labels.size(); ++i) {
        if (!out.empty()) out.push_back('.');
        out += labels[i];
    }
    return out;
}

}  // namespace

std::string Url::origin() const {
    std::string out = scheme + "://" + host;
    if (port) out += ":" + std::to_string(*port);
    return out;
}

std::optional<Url> parse_url(std::string_view text) {
    const std::size_t scheme_end = text.find("://");
    if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;

    Url url;
    url.scheme = to_lower(text.substr(0, scheme_end));
    for (char c : url.scheme) {
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '+' && c != '-') {
            return std::nullopt;
        }
    }

    std::string_view rest = text.substr(scheme_end + 3);
    const std::size_t path_begin = rest.find_first_of("/?");
    std::string_view authority = path_begin == std::string_view::npos
                                     ? rest
                                     : rest.substr(0, path_begin);
    if (authority.empty()) return std::nullopt;

    // Userinfo is not used by any plugin URL we consume; strip it if present.
    if (const std::size_t at = authority.rfind('@'); at != std::string_view::npos) {
        authority = authority.substr(at + 1);
    }

    std::string_view host = authority;
    if (const std::size_t colon = authority.rfind(':'); colon != std::string_view::npos) {
        host = authority.substr(0, colon);
        const std::string_view port_text = authority.substr(colon + 1);
        if (port_text.empty()) return std::nullopt;
        int port = 0;
        for (char c : port_text) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            port = port * 10 + (c - '0');
            if (port > 65535) return std::nullopt;
        }
        url.port = port;
    }
    if (host.empty()) return std::nullopt;
    url.host = to_lower(host);

    if (path_begin == std::string_view::npos) {
        url.path_and_query = "/";
    } else {
        url.path_and_query = std::string(rest.substr(path_begin));
        if (url.path_and_query.empty() || url.path_and_query[0] == '?') {
            url.path_and_query = "/" + url.path_and_query;
        }
    }
    return url;
}

bool is_absolute_url(std::string_view text) {
    return parse_url(text).has_value();
}

std::string registrable_domain(std::string_view host) {
    const std::string lowered = to_lower(host);
    const std::vector<std::string> labels = split_labels(lowered);
    if (labels.size() <= 2) return lowered;

    const std::string last_two = join_last_labels(labels, 2);
    const bool multi = std::find(kMultiLabelSuffixes.begin(), kMultiLabelSuffixes.end(),
                                 std::string_view(last_two)) != kMultiLabelSuffixes.end();
    return join_last_labels(labels, multi ? 3 : 2);
}

bool same_registrable_domain(std::string_view host_a, std::string_view host_b) {
    return registrable_domain(host_a) == registrable_domain(host_b);
}

}  // namespace plugaudit
