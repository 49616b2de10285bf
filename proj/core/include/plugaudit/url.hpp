#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace plugaudit {

/// Parsed absolute URL. Scheme and host are lowercased; path keeps the query.
struct Url {
    std::string scheme;
    std::string host;
    std::optional<int> port;
    std::string path_and_query;  // always begins with '/' (default "/")

    std::string origin() const;  // scheme://host[:port]
};

std::optional<Url> parse_url(std::string_view text);

bool is_absolute_url(std::string_view text);

/// The registrable (eTLD+1) part of a hostname, using an embedded list of
/// common multi-label public suffixes. Unknown suffixes fall back to the last
/// two labels.
std::string registrable_domain(std::string_view host);

bool same_registrable_domain(std::string_view host_a, std::string_view host_b);

}  // namespace plugaudit
