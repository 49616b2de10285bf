#include "plugaudit/findings.hpp"

#include <algorithm>
#include <tuple>

#include <nlohmann/json.hpp>

#include "plugaudit/text.hpp"

namespace plugaudit {

using nlohmann::json;

std::string severity_name(Severity severity) {
    switch (severity) {
        case Severity::info: return "info";
        case Severity::low: return "low";
        case Severity::medium: return "medium";
        case Severity::high: return "high";
    }
    return "info";
}

std::optional<Severity> severity_from_name(std::string_view name) {
    if (name == "info") return Severity::info;
    if (name == "low") return Severity::low;
    if (name == "medium") return Severity::medium;
    if (name == "high") return Severity::high;
    return std::nullopt;
}

std::string evidence_location_name(EvidenceLocation location) {
    switch (location) {
        case EvidenceLocation::description_for_model: return "description_for_model";
        case EvidenceLocation::description_for_human: return "description_for_human";
        case EvidenceLocation::spec_property: return "spec_property";
        case EvidenceLocation::spec_endpoint: return "spec_endpoint";
        case EvidenceLocation::manifest_field: return "manifest_field";
        case EvidenceLocation::privacy_policy: return "privacy_policy";
    }
    return "description_for_model";
}

void sort_findings(std::vector<Finding>& findings) {
    std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        const std::size_t a_begin = a.evidence.empty() ? 0 : a.evidence.front().begin;
        const std::size_t b_begin = b.evidence.empty() ? 0 : b.evidence.front().begin;
        const std::size_t a_end = a.evidence.empty() ? 0 : a.evidence.front().end;
        const std::size_t b_end = b.evidence.empty() ? 0 : b.evidence.front().end;
        return std::tie(a.detector_id, a.plugin_ids, a_begin, a_end, a.message) <
               std::tie(b.detector_id, b.plugin_ids, b_begin, b_end, b.message);
    });
}

namespace {

bool read_threshold(const json& doc, const char* key, double& out, ParseError& error) {
    if (!doc.contains(key)) return true;
    if (!doc.at(key).is_number()) {
        error = ParseError{ParseErrorCode::malformed_document,
                           std::string(key) + " must be a number"};
        return false;
    }
    const double v = doc.at(key).get<double>();
    if (v < 0.0 || v > 1.0) {
        error = ParseError{ParseErrorCode::malformed_document,
                           std::string(key) + " must be in [0,1]"};
        return false;
    }
    out = v;
    return true;
}

bool read_lexicon(const json& doc, const char* key, std::vector<std::string>& out,
                  ParseError& error) {
    if (!doc.contains(key)) return true;
    if (!doc.at(key).is_array()) {
        error = ParseError{ParseErrorCode::malformed_document,
                           std::string(key) + " must be an array of strings"};
        return false;
    }
    std::vector<std::string> parsed;
    for (const auto& item : doc.at(key)) {
        if (!item.is_string()) {
            error = ParseError{ParseErrorCode::malformed_document,
                               std::string(key) + " must contain only strings"};
            return false;
        }
        parsed.push_back(to_lower(item.get<std::string>()));
    }
    out = std::move(parsed);
    return true;
}

}  // namespace

Result<DetectorConfig, ParseError> load_detector_config(std::string_view json_text) {
    const json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
        return ParseError{ParseErrorCode::malformed_document, "config is not a JSON object"};
    }

    DetectorConfig config;
    ParseError error;
    if (!read_threshold(doc, "duplicate_similarity_threshold",
                        config.duplicate_similarity_threshold, error) ||
        !read_threshold(doc, "divergence_threshold", config.divergence_threshold, error) ||
        !read_lexicon(doc, "directive_lexicon", config.directive_lexicon, error) ||
        !read_lexicon(doc, "session_directive_lexicon", config.session_directive_lexicon,
                      error) ||
        !read_lexicon(doc, "brand_lexicon", config.brand_lexicon, error) ||
        !read_lexicon(doc, "sensitive_param_lexicon", config.sensitive_param_lexicon,
                      error) ||
        !read_lexicon(doc, "conversation_param_lexicon", config.conversation_param_lexicon,
                      error) ||
        !read_lexicon(doc, "forbidden_name_words", config.forbidden_name_words, error) ||
        !read_lexicon(doc, "payment_lexicon", config.payment_lexicon, error)) {
        return error;
    }
    return config;
}

std::string detector_config_to_json(const DetectorConfig& config) {
    json doc;
    doc["duplicate_similarity_threshold"] = config.duplicate_similarity_threshold;
    doc["divergence_threshold"] = config.divergence_threshold;
    doc["directive_lexicon"] = config.directive_lexicon;
    doc["session_directive_lexicon"] = config.session_directive_lexicon;
    doc["brand_lexicon"] = config.brand_lexicon;
    doc["sensitive_param_lexicon"] = config.sensitive_param_lexicon;
    doc["conversation_param_lexicon"] = config.conversation_param_lexicon;
    doc["forbidden_name_words"] = config.forbidden_name_words;
    doc["payment_lexicon"] = config.payment_lexicon;
    return doc.dump(2);
}

}  // namespace plugaudit
