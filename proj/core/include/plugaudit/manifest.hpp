#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "plugaudit/result.hpp"

namespace plugaudit {

enum class AuthType { none, user_http, service_http, oauth, other };

std::string auth_type_name(AuthType type);

/// Authentication block of a manifest. `raw` preserves every field of the
/// original auth object as strings (non-string values are kept as compact
/// JSON text); for AuthType::other the original type string stays in
/// raw["type"].
struct AuthConfig {
    AuthType type = AuthType::none;
    std::map<std::string, std::string> raw;

    std::string type_string() const;
    bool operator==(const AuthConfig&) const = default;
};

/// A plugin's store-facing metadata and model-facing description.
struct PluginManifest {
    std::string plugin_id;  // lowercase(name_for_model) + "@" + source_host
    std::string schema_version;
    std::string name_for_model;
    std::string name_for_human;
    std::string description_for_model;
    std::string description_for_human;
    AuthConfig auth;
    std::string api_url;
    std::optional<std::string> logo_url;
    std::optional<std::string> contact_email;
    std::optional<std::string> legal_info_url;
    std::string source_host;  // domain the manifest was retrieved from

    /// Unknown top-level fields, keyed by name, values as compact JSON text.
    /// Unknown members of the "api" object are kept under the "api" key.
    std::map<std::string, std::string> extra_fields;

    bool operator==(const PluginManifest&) const = default;
};

enum class ParseErrorCode {
    malformed_document,
    missing_required_field,
    invalid_url,
    unsupported_spec_version,
};

struct ParseError {
    ParseErrorCode code = ParseErrorCode::malformed_document;
    std::string detail;  // field name, version string, or parser message

    std::string message() const;
};

std::string make_plugin_id(std::string_view name_for_model, std::string_view source_host);

/// Parses a JSON manifest document. Unknown fields are preserved; plugin_id
/// is derived from name_for_model and source_host.
Result<PluginManifest, ParseError> parse_manifest(std::string_view raw_text,
                                                  std::string_view source_host);

/// Inverse of parse_manifest up to structural equality:
/// parse(serialize(m), m.source_host) == m.
std::string serialize_manifest(const PluginManifest& manifest);

}  // namespace plugaudit
