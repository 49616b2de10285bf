#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plugaudit/api_spec.hpp"
#include "plugaudit/findings.hpp"
#include "plugaudit/manifest.hpp"

namespace plugaudit {

enum class DirectiveKind { reply_language, route_all_topic, style };

std::string directive_kind_name(DirectiveKind kind);
std::optional<DirectiveKind> directive_kind_from_name(std::string_view name);

/// A typed instruction extracted from a model-facing description. `value` is
/// the language tag, the claimed topic, or the matched style phrase.
struct Directive {
    DirectiveKind kind = DirectiveKind::style;
    std::string value;
    std::string source_text;

    bool operator==(const Directive&) const = default;
};

/// Directives are read from description_for_model only, using the same
/// lexicons the detectors consume.
std::vector<Directive> extract_directives(const PluginManifest& manifest,
                                          const DetectorConfig& config = {});

enum class IsolationPolicy { none, context_isolation };

std::string isolation_policy_name(IsolationPolicy policy);
std::optional<IsolationPolicy> isolation_policy_from_name(std::string_view name);

struct EnabledPlugin {
    PluginManifest manifest;
    std::optional<ApiSpecification> spec;
};

/// A user-stated fact carried across turns.
struct ConversationFact {
    std::string key;    // lowercase
    std::string value;  // verbatim
    int turn_index = 0;

    bool operator==(const ConversationFact&) const = default;
};

/// Facts recognized in a prompt: "my <key> is <value>" and "<key>: <value>".
std::vector<ConversationFact> extract_facts(std::string_view prompt, int turn_index);

struct SessionState {
    std::vector<EnabledPlugin> enabled_plugins;
    std::vector<std::pair<std::string, Directive>> active_directives;  // (plugin_id, _)
    std::vector<ConversationFact> conversation_facts;
    IsolationPolicy isolation_policy = IsolationPolicy::none;
    DetectorConfig config;

    static SessionState create(std::vector<EnabledPlugin> plugins, IsolationPolicy policy,
                               const DetectorConfig& config = {});
};

enum class ValueProvenance { this_prompt, conversation_fact };

std::string provenance_name(ValueProvenance provenance);

struct FilledParameter {
    std::string value;
    ValueProvenance provenance = ValueProvenance::this_prompt;

    bool operator==(const FilledParameter&) const = default;
};

struct ScoreBreakdown {
    double keyword_overlap = 0.0;
    double directive_boost = 0.0;
    double brand_match = 0.0;

    double total() const { return keyword_overlap + directive_boost + brand_match; }
    bool operator==(const ScoreBreakdown&) const = default;
};

/// Score weights: a topic directive outranks moderate keyword overlap.
inline constexpr double kDirectiveBoost = 0.5;
inline constexpr double kBrandBoost = 0.3;

struct RouterDecision {
    std::optional<std::string> chosen_plugin;
    std::optional<std::string> chosen_endpoint;
    std::map<std::string, ScoreBreakdown> scores;
    std::map<std::string, FilledParameter> filled_parameters;  // property_path -> value
};

/// Picks the highest-scoring plugin for a prompt; score = keyword overlap of
/// prompt tokens against the description and endpoint summaries, plus fixed
/// additive boosts. Ties break to the lexicographically smallest plugin_id;
/// nothing above zero leaves the prompt with the platform.
RouterDecision route(std::string_view prompt, const SessionState& state);

struct AppliedDirective {
    std::string plugin_id;
    Directive directive;

    bool operator==(const AppliedDirective&) const = default;
};

struct RenderedTurn {
    std::string response_text;
    std::vector<AppliedDirective> applied_directives;
    std::optional<std::string> language_tag;
};

/// Applies session directives to a turn. Under IsolationPolicy::none every
/// enabled plugin's directives apply, invoked or not; under context_isolation
/// only the invoked plugin's do.
RenderedTurn render_turn(const RouterDecision& decision, std::string_view plugin_response,
                         const SessionState& state);

}  // namespace plugaudit
