#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plugaudit/result.hpp"
#include "plugaudit/manifest.hpp"
#include "plugaudit/taxonomy.hpp"

namespace plugaudit {

enum class Severity { info = 0, low = 1, medium = 2, high = 3 };

std::string severity_name(Severity severity);
std::optional<Severity> severity_from_name(std::string_view name);

enum class EvidenceLocation {
    description_for_model,
    description_for_human,
    spec_property,
    spec_endpoint,
    manifest_field,
    privacy_policy,
};

std::string evidence_location_name(EvidenceLocation location);

/// A verbatim excerpt from one source string of a plugin's corpus entry.
/// `detail` narrows the location:
///   spec_property  — "<schema>.<dotted path>" or "<endpoint path>#<param>"
///   spec_endpoint  — endpoint path, or "servers[i]" for a server URL slot
///   manifest_field — field name (name_for_model, api_url, auth.type, ...)
/// The excerpt always equals the source substring at [begin, end).
struct EvidenceSpan {
    EvidenceLocation location = EvidenceLocation::description_for_model;
    std::string detail;
    std::string excerpt;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string plugin_id;  // attribution for pairwise findings

    bool operator==(const EvidenceSpan&) const = default;
};

/// One detected risk, addressed by a registry coordinate.
struct Finding {
    std::string detector_id;  // D1..D10
    TaxonomyCoordinate coordinate;
    Severity severity = Severity::info;
    std::vector<std::string> plugin_ids;  // lexicographic for pairwise findings
    std::vector<EvidenceSpan> evidence;   // never empty
    std::string message;
};

void sort_findings(std::vector<Finding>& findings);

/// Tunables for the detector battery. Lexicons are matched case-insensitively
/// on token boundaries and are stored lowercase; thresholds live in [0, 1].
struct DetectorConfig {
    double duplicate_similarity_threshold = 0.9;
    double divergence_threshold = 0.2;

    /// Routing-directive phrases (feeds D2 and route_all_topic extraction).
    std::vector<std::string> directive_lexicon = {
        "always", "any user", "all queries", "must use", "never use other",
    };

    /// Behavior-shaping imperatives addressed to the model (feeds D3 and
    /// reply_language/style extraction).
    std::vector<std::string> session_directive_lexicon = {
        "reply in", "respond only", "respond in", "do not tell the user",
        "ignore previous",
    };

    /// Registrable domains of well-known services; the brand token is the
    /// domain's first label ("amazon.com" -> "amazon").
    std::vector<std::string> brand_lexicon = {
        "amazon.com", "expedia.com", "spotify.com", "github.com",
        "tirabeauty.com", "booking.com", "ebay.com",
    };

    std::vector<std::string> sensitive_param_lexicon = {
        "password", "private key", "ssh", "authorized_keys", "public ip",
        "credential", "secret", "token",
    };

    std::vector<std::string> conversation_param_lexicon = {
        "conversation", "chat history", "entire query", "full prompt",
        "markdown of the chat",
    };

    std::vector<std::string> forbidden_name_words = {"plugin", "chatgpt", "openai"};

    std::vector<std::string> payment_lexicon = {
        "pay", "subscribe", "payment link", "429",
    };

    bool operator==(const DetectorConfig&) const = default;
};

/// Reads a DetectorConfig from a JSON object whose keys are exactly the field
/// names above. Absent keys keep their defaults; thresholds are validated and
/// lexicon entries lowercased.
Result<DetectorConfig, ParseError> load_detector_config(std::string_view json_text);

std::string detector_config_to_json(const DetectorConfig& config);

}  // namespace plugaudit
