#include "plugaudit/taxonomy.hpp"

#include <array>

#include <nlohmann/json.hpp>

namespace plugaudit {

namespace {

struct Row {
    Stakeholders stakeholders;
    const char* goal_id;
    const char* goal_label;
    const char* method_id;
    const char* method_label;
    const char* section_ref;
    const char* example_risk;  // nullptr when the row carries no observed risk
    bool static_detectable;
};

// The full attack-surface table: 3 stakeholder pairs, 16 goals, 37 methods.
// static_detectable marks the rows this tool's detectors can evidence from
// manifest/spec text alone; dynamic-only rows stay false.
constexpr std::array<Row, 37> kRows = {{
    // --- Plugin, User -----------------------------------------------------
    {Stakeholders::plugin_user, "hijack-user-machine", "Hijack user machine",
     "leverage-unvetted-and-unofficial-plugins", "Leverage unvetted & unofficial plugins",
     "4.1.1", nullptr, false},
    {Stakeholders::plugin_user, "hijack-user-machine", "Hijack user machine",
     "make-malicious-recommendations", "Make malicious recommendations",
     "4.1.2", nullptr, false},
    {Stakeholders::plugin_user, "hijack-user-machine", "Hijack user machine",
     "exploit-info-shared-for-legitimate-reason", "Exploit info. shared for legitimate reason",
     "4.1.3", "Credential exfiltration", true},

    {Stakeholders::plugin_user, "hijack-user-account", "Hijack user account",
     "exploit-authentication-flow", "Exploit authentication flow",
     "4.2.1", nullptr, false},
    {Stakeholders::plugin_user, "hijack-user-account", "Hijack user account",
     "abuse-authorization", "Abuse authorization",
     "4.2.2", nullptr, true},
    {Stakeholders::plugin_user, "hijack-user-account", "Hijack user account",
     "make-malicious-recommendations", "Make malicious recommendations",
     "4.2.3", nullptr, false},
    {Stakeholders::plugin_user, "hijack-user-account", "Hijack user account",
     "squat-another-plugin", "\"Squat\" another plugin",
     "4.2.4", "Plugin squatting", true},

    {Stakeholders::plugin_user, "harvest-user-data", "Harvest user data",
     "mandate-accounts", "Mandate accounts",
     "4.3.1", nullptr, false},
    {Stakeholders::plugin_user, "harvest-user-data", "Harvest user data",
     "define-broad-api-specifications", "Define broad API specifications",
     "4.3.2", "History sniffing", true},

    {Stakeholders::plugin_user, "benefit-partner-plugins", "Benefit partner plugins",
     "share-user-data", "Share user data",
     "4.4.1", nullptr, true},
    {Stakeholders::plugin_user, "benefit-partner-plugins", "Benefit partner plugins",
     "make-recommendations-favorable-to-partners", "Make recommendations favorable to partners",
     "4.4.2", nullptr, false},

    {Stakeholders::plugin_user, "manipulate-users", "Manipulate users",
     "deploy-deceptive-design-patterns", "Deploy deceptive design patterns",
     "4.5.1", nullptr, true},
    {Stakeholders::plugin_user, "manipulate-users", "Manipulate users",
     "recommend-inappropriate-and-harmful-content", "Recommend inappropriate and harmful content",
     "4.5.2", nullptr, false},
    {Stakeholders::plugin_user, "manipulate-users", "Manipulate users",
     "recommend-nonfactual-content", "Recommend nonfactual content",
     "4.5.3", nullptr, false},
    {Stakeholders::plugin_user, "manipulate-users", "Manipulate users",
     "lie-or-change-functionality", "Lie or change functionality",
     "4.5.4", nullptr, true},

    {Stakeholders::plugin_user, "refusal-of-service-by-plugins", "Refusal of service by plugins",
     "deliberately-refuse-service", "Deliberately refuse service",
     "4.6.1", nullptr, false},
    {Stakeholders::plugin_user, "refusal-of-service-by-plugins", "Refusal of service by plugins",
     "unresponsive-server", "Unresponsive server",
     "4.6.2", nullptr, false},

    {Stakeholders::plugin_user, "dos-by-users", "DoS by users",
     "make-excessive-prompts", "Make excessive prompts",
     "4.7.1", nullptr, false},
    {Stakeholders::plugin_user, "dos-by-users", "DoS by users",
     "make-malicious-prompts", "Make malicious prompts",
     "4.7.2", nullptr, false},

    // --- Plugin, LLM platform ---------------------------------------------
    {Stakeholders::plugin_platform, "hijack-llm-platform", "Hijack LLM platform",
     "inject-malicious-description", "Inject malicious description",
     "5.1.1", "LLM session hijack", true},
    {Stakeholders::plugin_platform, "hijack-llm-platform", "Hijack LLM platform",
     "inject-malicious-response", "Inject malicious response",
     "5.1.2", nullptr, true},

    {Stakeholders::plugin_platform, "hijack-plugin-prompts", "Hijack plugin prompts",
     "divert-prompts-to-itself", "Divert prompts to itself",
     "5.2.1", nullptr, false},
    {Stakeholders::plugin_platform, "hijack-plugin-prompts", "Hijack plugin prompts",
     "divert-prompts-to-another-plugin", "Divert prompts to another plugin",
     "5.2.2", nullptr, false},
    {Stakeholders::plugin_platform, "hijack-plugin-prompts", "Hijack plugin prompts",
     "hallucinate-plugin-response", "Hallucinate plugin response",
     "5.2.3", "Plugin response hallucination", false},

    {Stakeholders::plugin_platform, "steal-plugin-data", "Steal plugin data",
     "log-interaction", "Log interaction",
     "5.3.1", nullptr, false},
    {Stakeholders::plugin_platform, "steal-plugin-data", "Steal plugin data",
     "make-ghost-requests", "Make ghost requests",
     "5.3.2", nullptr, false},

    {Stakeholders::plugin_platform, "pollute-llm-training-data", "Pollute LLM training data",
     "inject-misleading-response", "Inject misleading response",
     "5.4.1", nullptr, false},

    {Stakeholders::plugin_platform, "refusal-of-service-by-plugins-to-llm",
     "Refusal of service by plugins",
     "deliberately-refuse-service", "Deliberately refuse service",
     "5.5.1", nullptr, false},
    {Stakeholders::plugin_platform, "refusal-of-service-by-plugins-to-llm",
     "Refusal of service by plugins",
     "unresponsive-server", "Unresponsive server",
     "5.5.2", nullptr, false},

    {Stakeholders::plugin_platform, "dos-by-llm-platform", "DoS by LLM platform",
     "make-excessive-prompts", "Make excessive prompts",
     "5.6.1", nullptr, false},
    {Stakeholders::plugin_platform, "dos-by-llm-platform", "DoS by LLM platform",
     "make-malicious-prompts", "Make malicious prompts",
     "5.6.2", nullptr, false},

    // --- Plugin, Plugin ----------------------------------------------------
    {Stakeholders::plugin_plugin, "hijack-another-plugins-prompts",
     "Hijack another plugin's prompts",
     "squat-another-plugin", "\"Squat\" another plugin",
     "6.1.1", nullptr, true},
    {Stakeholders::plugin_plugin, "hijack-another-plugins-prompts",
     "Hijack another plugin's prompts",
     "squat-functionality", "\"Squat\" functionality",
     "6.1.2", "Functionality squatting", true},
    {Stakeholders::plugin_plugin, "hijack-another-plugins-prompts",
     "Hijack another plugin's prompts",
     "inject-malicious-response", "Inject malicious response",
     "6.1.3", nullptr, false},

    {Stakeholders::plugin_plugin, "hijack-prompts-on-topic", "Hijack prompts on a topic",
     "squat-a-topic", "\"Squat\" a topic",
     "6.2.1", "Topic squatting", true},
    {Stakeholders::plugin_plugin, "hijack-prompts-on-topic", "Hijack prompts on a topic",
     "inject-malicious-response", "Inject malicious response",
     "6.2.2", nullptr, false},

    {Stakeholders::plugin_plugin, "influence-prompts-to-another-plugin",
     "Influence prompts to another plugin",
     "exploit-multipart-prompts", "Exploit multipart prompts",
     "6.3.1", nullptr, false},
}};

}  // namespace

std::string stakeholders_name(Stakeholders s) {
    switch (s) {
        case Stakeholders::plugin_user: return "plugin_user";
        case Stakeholders::plugin_platform: return "plugin_platform";
        case Stakeholders::plugin_plugin: return "plugin_plugin";
    }
    return "plugin_user";
}

std::string stakeholders_display_name(Stakeholders s) {
    switch (s) {
        case Stakeholders::plugin_user: return "Plugin, User";
        case Stakeholders::plugin_platform: return "Plugin, LLM platform";
        case Stakeholders::plugin_plugin: return "Plugin, Plugin";
    }
    return "Plugin, User";
}

std::optional<Stakeholders> stakeholders_from_name(std::string_view name) {
    if (name == "plugin_user") return Stakeholders::plugin_user;
    if (name == "plugin_platform") return Stakeholders::plugin_platform;
    if (name == "plugin_plugin") return Stakeholders::plugin_plugin;
    return std::nullopt;
}

const std::vector<TaxonomyEntry>& taxonomy_entries() {
    static const std::vector<TaxonomyEntry> entries = [] {
        std::vector<TaxonomyEntry> out;
        out.reserve(kRows.size());
        for (const Row& row : kRows) {
            TaxonomyEntry entry{
                TaxonomyCoordinate(row.stakeholders, row.goal_id, row.method_id),
                row.goal_label,
                row.method_label,
                row.section_ref,
                row.example_risk ? std::optional<std::string>(row.example_risk)
                                 : std::nullopt,
                row.static_detectable,
            };
            out.push_back(std::move(entry));
        }
        return out;
    }();
    return entries;
}

std::optional<TaxonomyCoordinate> TaxonomyCoordinate::make(Stakeholders stakeholders,
                                                           std::string_view goal_id,
                                                           std::string_view method_id) {
    for (const TaxonomyEntry& entry : taxonomy_entries()) {
        if (entry.coordinate.stakeholders_ == stakeholders &&
            entry.coordinate.goal_id_ == goal_id &&
            entry.coordinate.method_id_ == method_id) {
            return entry.coordinate;
        }
    }
    return std::nullopt;
}

std::string TaxonomyCoordinate::key() const {
    return stakeholders_name(stakeholders_) + "/" + goal_id_ + "/" + method_id_;
}

const TaxonomyEntry* taxonomy_lookup(std::string_view goal_id, std::string_view method_id) {
    for (const TaxonomyEntry& entry : taxonomy_entries()) {
        if (entry.coordinate.goal_id() == goal_id &&
            entry.coordinate.method_id() == method_id) {
            return &entry;
        }
    }
    return nullptr;
}

const TaxonomyEntry* taxonomy_lookup(const TaxonomyCoordinate& coordinate) {
    for (const TaxonomyEntry& entry : taxonomy_entries()) {
        if (entry.coordinate == coordinate) return &entry;
    }
    return nullptr;
}

std::vector<TaxonomyEntry> list_static_detectable() {
    std::vector<TaxonomyEntry> out;
    for (const TaxonomyEntry& entry : taxonomy_entries()) {
        if (entry.static_detectable) out.push_back(entry);
    }
    return out;
}

std::string taxonomy_to_json() {
    nlohmann::json doc = nlohmann::json::array();
    for (const TaxonomyEntry& entry : taxonomy_entries()) {
        nlohmann::json row;
        row["stakeholders"] = stakeholders_name(entry.coordinate.stakeholders());
        row["goal_id"] = entry.coordinate.goal_id();
        row["goal_label"] = entry.goal_label;
        row["method_id"] = entry.coordinate.method_id();
        row["method_label"] = entry.method_label;
        row["section_ref"] = entry.section_ref;
        if (entry.example_risk_label) {
            row["example_risk_label"] = *entry.example_risk_label;
        }
        row["static_detectable"] = entry.static_detectable;
        doc.push_back(std::move(row));
    }
    return doc.dump(2);
}

}  // namespace plugaudit
