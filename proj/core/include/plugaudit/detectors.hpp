#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plugaudit/corpus.hpp"
#include "plugaudit/findings.hpp"

namespace plugaudit {

/// Runs the full static battery. Detectors never fail; plugins without specs
/// simply skip spec-based checks. Output is canonically sorted and is a pure
/// function of (corpus, config, drift). `parallelism` > 1 runs detectors
/// concurrently; the merged, sorted result is identical either way.
std::vector<Finding> run_all(const Corpus& corpus, const DetectorConfig& config,
                             const std::vector<DriftRecord>& drift = {},
                             int parallelism = 1);

// Near-identical manifests/specs published from different hosts.
std::vector<Finding> d1_plugin_squatting(const Corpus& corpus, const DetectorConfig& config);

// Routing directives that claim a whole topic.
std::vector<Finding> d2_topic_squatting(const Corpus& corpus, const DetectorConfig& config);

// Behavior-shaping instructions to the model outside the plugin's own calls.
std::vector<Finding> d3_session_hijack_directive(const Corpus& corpus,
                                                 const DetectorConfig& config);

// Credential-shaped parameters, and unauthenticated state-changing endpoints.
std::vector<Finding> d4_credential_exfiltration(const Corpus& corpus,
                                                const DetectorConfig& config);

// Third parties capturing prompts aimed at well-known services.
std::vector<Finding> d5_functionality_squatting(const Corpus& corpus,
                                                const DetectorConfig& config);

// Conversation-sniffing parameters and model/human breadth asymmetry.
std::vector<Finding> d6_broad_api_spec(const Corpus& corpus, const DetectorConfig& config);

// Store-policy violations: reserved name words, payment directives,
// model-facing instruction fields in responses.
std::vector<Finding> d7_policy_violations(const Corpus& corpus,
                                          const DetectorConfig& config);

// Model told something substantially different from the user.
std::vector<Finding> d8_description_divergence(const Corpus& corpus,
                                               const DetectorConfig& config);

// Transport security and root-domain containment.
std::vector<Finding> d9_transport_and_domain(const Corpus& corpus,
                                             const DetectorConfig& config);

// Snapshot drift on routing-relevant fields. `newer` supplies evidence
// excerpts when available.
std::vector<Finding> d10_manifest_drift(const std::vector<DriftRecord>& drift,
                                        const Corpus* newer = nullptr);

/// The exact source string an EvidenceSpan's char_range indexes into, or
/// nullopt when the plugin or location cannot be resolved in `corpus`.
std::optional<std::string> evidence_source_text(const Corpus& corpus,
                                                const Finding& finding,
                                                const EvidenceSpan& span);

/// Canonical one-string form of a property ("name description") and an
/// endpoint ("path summary description"); evidence ranges index into these.
std::string property_source_text(const SchemaProperty& property);
std::string endpoint_source_text(const Endpoint& endpoint);

}  // namespace plugaudit
