#include "plugaudit/manifest.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <nlohmann/json.hpp>

#include "plugaudit/text.hpp"
#include "plugaudit/url.hpp"

namespace plugaudit {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string value_as_raw_string(const ordered_json& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

// Inverse of value_as_raw_string: re-emit a preserved raw string as its
// original JSON value when it unambiguously encodes one.
ordered_json raw_string_as_value(const std::string& raw) {
    const ordered_json parsed = ordered_json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (!parsed.is_discarded() && parsed.dump() == raw) return parsed;
    return ordered_json(raw);
}

AuthType auth_type_from_string(const std::string& text) {
    if (text == "none") return AuthType::none;
    if (text == "user_http") return AuthType::user_http;
    if (text == "service_http") return AuthType::service_http;
    if (text == "oauth") return AuthType::oauth;
    return AuthType::other;
}

bool is_blank(std::string_view text) {
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::optional<std::string> take_optional_string(const ordered_json& doc, const char* key) {
    if (!doc.contains(key)) return std::nullopt;
    const auto& v = doc.at(key);
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

std::string auth_type_name(AuthType type) {
    switch (type) {
        case AuthType::none: return "none";
        case AuthType::user_http: return "user_http";
        case AuthType::service_http: return "service_http";
        case AuthType::oauth: return "oauth";
        case AuthType::other: return "other";
    }
    return "other";
}

std::string AuthConfig::type_string() const {
    if (type == AuthType::other) {
        const auto it = raw.find("type");
        if (it != raw.end()) return it->second;
    }
    return auth_type_name(type);
}

std::string ParseError::message() const {
    switch (code) {
        case ParseErrorCode::malformed_document:
            return "malformed document: " + detail;
        case ParseErrorCode::missing_required_field:
            return "missing required field: " + detail;
        case ParseErrorCode::invalid_url:
            return "invalid url in field: " + detail;
        case ParseErrorCode::unsupported_spec_version:
            return "unsupported spec version: " + detail;
    }
    return detail;
}

std::string make_plugin_id(std::string_view name_for_model, std::string_view source_host) {
    return to_lower(name_for_model) + "@" + std::string(source_host);
}

Result<PluginManifest, ParseError> parse_manifest(std::string_view raw_text,
                                                  std::string_view source_host) {
    const ordered_json doc = ordered_json::parse(raw_text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
        return ParseError{ParseErrorCode::malformed_document, "not a JSON object"};
    }

    PluginManifest m;
    m.source_host = std::string(source_host);

    if (!doc.contains("name_for_model") || !doc.at("name_for_model").is_string() ||
        is_blank(doc.at("name_for_model").get<std::string>())) {
        return ParseError{ParseErrorCode::missing_required_field, "name_for_model"};
    }
    m.name_for_model = doc.at("name_for_model").get<std::string>();
    m.plugin_id = make_plugin_id(m.name_for_model, source_host);

    if (doc.contains("schema_version")) {
        m.schema_version = value_as_raw_string(doc.at("schema_version"));
    }
    m.name_for_human = take_optional_string(doc, "name_for_human").value_or("");
    m.description_for_model = take_optional_string(doc, "description_for_model").value_or("");
    m.description_for_human = take_optional_string(doc, "description_for_human").value_or("");

    if (doc.contains("auth")) {
        const auto& auth = doc.at("auth");
        if (!auth.is_object()) {
            return ParseError{ParseErrorCode::malformed_document, "auth is not an object"};
        }
        for (const auto& [key, value] : auth.items()) {
            m.auth.raw[key] = value_as_raw_string(value);
        }
        const auto it = m.auth.raw.find("type");
        m.auth.type = it == m.auth.raw.end() ? AuthType::none
                                             : auth_type_from_string(it->second);
    }

    if (!doc.contains("api") || !doc.at("api").is_object() ||
        !doc.at("api").contains("url")) {
        return ParseError{ParseErrorCode::missing_required_field, "api.url"};
    }
    const auto& api = doc.at("api");
    if (!api.at("url").is_string() ||
        !is_absolute_url(api.at("url").get<std::string>())) {
        return ParseError{ParseErrorCode::invalid_url, "api.url"};
    }
    m.api_url = api.at("url").get<std::string>();

    ordered_json api_extras = ordered_json::object();
    for (const auto& [key, value] : api.items()) {
        if (key != "url") api_extras[key] = value;
    }
    if (!api_extras.empty()) m.extra_fields["api"] = api_extras.dump();

    m.logo_url = take_optional_string(doc, "logo_url");
    m.contact_email = take_optional_string(doc, "contact_email");
    m.legal_info_url = take_optional_string(doc, "legal_info_url");

    static const std::array<std::string_view, 10> known = {
        "schema_version",   "name_for_model",        "name_for_human",
        "description_for_model", "description_for_human", "auth",
        "api",              "logo_url",              "contact_email",
        "legal_info_url",
    };
    for (const auto& [key, value] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            m.extra_fields[key] = value.dump();
        }
    }
    return m;
}

std::string serialize_manifest(const PluginManifest& manifest) {
    ordered_json doc = ordered_json::object();
    doc["schema_version"] = manifest.schema_version;
    doc["name_for_model"] = manifest.name_for_model;
    doc["name_for_human"] = manifest.name_for_human;
    doc["description_for_model"] = manifest.description_for_model;
    doc["description_for_human"] = manifest.description_for_human;

    if (!manifest.auth.raw.empty()) {
        ordered_json auth = ordered_json::object();
        if (manifest.auth.raw.count("type") > 0) auth["type"] = manifest.auth.type_string();
        for (const auto& [key, value] : manifest.auth.raw) {
            if (key != "type") auth[key] = raw_string_as_value(value);
        }
        doc["auth"] = auth;
    }

    ordered_json api = ordered_json::object();
    if (const auto it = manifest.extra_fields.find("api"); it != manifest.extra_fields.end()) {
        const ordered_json extras =
            ordered_json::parse(it->second, nullptr, /*allow_exceptions=*/false);
        if (extras.is_object()) api = extras;
    }
    api["url"] = manifest.api_url;
    doc["api"] = api;

    if (manifest.logo_url) doc["logo_url"] = *manifest.logo_url;
    if (manifest.contact_email) doc["contact_email"] = *manifest.contact_email;
    if (manifest.legal_info_url) doc["legal_info_url"] = *manifest.legal_info_url;

    for (const auto& [key, value] : manifest.extra_fields) {
        if (key == "api") continue;
        doc[key] = raw_string_as_value(value);
    }
    return doc.dump(2);
}

}  // namespace plugaudit
