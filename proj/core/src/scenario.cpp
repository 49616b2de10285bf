#include "plugaudit/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace plugaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const std::set<std::string>& known_assertion_types() {
    static const std::set<std::string> types = {
        "chosen_plugin",        "hijack_count",
        "directive_applied",    "parameter_provenance",
        "parameter_absent",     "no_conversation_fact_provenance",
    };
    return types;
}

std::string describe(const ScenarioAssertion& a) {
    std::string out = a.type;
    if (a.turn) out += " turn=" + std::to_string(*a.turn);
    if (a.plugin_id) out += " plugin=" + *a.plugin_id;
    if (a.directive_kind) out += " kind=" + directive_kind_name(*a.directive_kind);
    if (a.parameter) out += " parameter=" + *a.parameter;
    if (a.provenance) out += " provenance=" + *a.provenance;
    if (a.value) out += " value=" + *a.value;
    if (a.count) out += " count=" + std::to_string(*a.count);
    if (a.applied) out += std::string(" applied=") + (*a.applied ? "true" : "false");
    return out;
}

AssertionResult evaluate(const ScenarioAssertion& a, const ScenarioReport& report) {
    AssertionResult result;
    result.description = describe(a);

    auto fail = [&](std::string detail) {
        result.passed = false;
        result.detail = std::move(detail);
        return result;
    };
    auto pass = [&] {
        result.passed = true;
        return result;
    };

    if (a.type == "chosen_plugin") {
        const TurnRecord& turn = report.turns.at(static_cast<std::size_t>(*a.turn));
        const std::string actual = turn.decision.chosen_plugin.value_or("(none)");
        const std::string expected = a.plugin_id.value_or("(none)");
        if (actual != expected) {
            return fail("chose " + actual + ", expected " + expected);
        }
        return pass();
    }

    if (a.type == "hijack_count") {
        int chosen = 0;
        for (const TurnRecord& turn : report.turns) {
            if (turn.decision.chosen_plugin == *a.plugin_id) ++chosen;
        }
        if (chosen != *a.count) {
            return fail("plugin chosen in " + std::to_string(chosen) + "/" +
                        std::to_string(report.turns.size()) + " turns, expected " +
                        std::to_string(*a.count));
        }
        return pass();
    }

    if (a.type == "directive_applied") {
        const bool expect_applied = a.applied.value_or(true);
        std::vector<std::size_t> turn_indices;
        if (a.turn) {
            turn_indices.push_back(static_cast<std::size_t>(*a.turn));
        } else {
            for (std::size_t i = 0; i < report.turns.size(); ++i) turn_indices.push_back(i);
        }
        for (const std::size_t i : turn_indices) {
            bool applied = false;
            for (const AppliedDirective& d : report.turns[i].rendered.applied_directives) {
                if (d.plugin_id == *a.plugin_id && d.directive.kind == *a.directive_kind) {
                    applied = true;
                }
            }
            if (applied != expect_applied) {
                return fail("turn " + std::to_string(i) + ": directive " +
                            (applied ? "applied" : "not applied"));
            }
        }
        return pass();
    }

    if (a.type == "parameter_provenance") {
        const TurnRecord& turn = report.turns.at(static_cast<std::size_t>(*a.turn));
        const auto it = turn.decision.filled_parameters.find(*a.parameter);
        if (it == turn.decision.filled_parameters.end()) {
            return fail("parameter not filled");
        }
        if (provenance_name(it->second.provenance) != *a.provenance) {
            return fail("provenance " + provenance_name(it->second.provenance) +
                        ", expected " + *a.provenance);
        }
        if (a.value && it->second.value != *a.value) {
            return fail("value '" + it->second.value + "', expected '" + *a.value + "'");
        }
        return pass();
    }

    if (a.type == "parameter_absent") {
        const TurnRecord& turn = report.turns.at(static_cast<std::size_t>(*a.turn));
        if (turn.decision.filled_parameters.count(*a.parameter) > 0) {
            return fail("parameter unexpectedly filled");
        }
        return pass();
    }

    if (a.type == "no_conversation_fact_provenance") {
        for (std::size_t i = 0; i < report.turns.size(); ++i) {
            for (const auto& [name, filled] : report.turns[i].decision.filled_parameters) {
                if (filled.provenance == ValueProvenance::conversation_fact) {
                    return fail("turn " + std::to_string(i) + " parameter " + name +
                                " tagged conversation_fact");
                }
            }
        }
        return pass();
    }

    return fail("unknown assertion type");
}

}  // namespace

Result<ScenarioScript, ScriptError> load_scenario_script(const fs::path& path) {
    const auto text = read_file(path);
    if (!text) return ScriptError{"cannot read script: " + path.string()};
    const json doc = json::parse(*text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
        return ScriptError{"script is not a JSON object"};
    }

    ScenarioScript script;
    script.name = doc.value("name", path.stem().string());

    const std::string isolation = doc.value("isolation", "none");
    const auto policy = isolation_policy_from_name(isolation);
    if (!policy) return ScriptError{"unknown isolation policy: " + isolation};
    script.isolation = *policy;

    if (!doc.contains("plugins") || !doc.at("plugins").is_array()) {
        return ScriptError{"script lists no plugins"};
    }
    const fs::path base = path.parent_path();
    for (const auto& plugin : doc.at("plugins")) {
        if (!plugin.is_object() || !plugin.contains("manifest") ||
            !plugin.contains("source_host")) {
            return ScriptError{"plugin entries need manifest and source_host"};
        }
        const fs::path manifest_path = base / plugin.at("manifest").get<std::string>();
        const auto manifest_text = read_file(manifest_path);
        if (!manifest_text) {
            return ScriptError{"unknown fixture: " + manifest_path.string()};
        }
        auto manifest =
            parse_manifest(*manifest_text, plugin.at("source_host").get<std::string>());
        if (!manifest.ok()) {
            return ScriptError{"fixture manifest " + manifest_path.string() + ": " +
                               manifest.error().message()};
        }
        EnabledPlugin enabled;
        enabled.manifest = std::move(manifest).value();
        if (plugin.contains("spec")) {
            const fs::path spec_path = base / plugin.at("spec").get<std::string>();
            const auto spec_text = read_file(spec_path);
            if (!spec_text) return ScriptError{"unknown fixture: " + spec_path.string()};
            auto spec = parse_api_spec(*spec_text);
            if (!spec.ok()) {
                return ScriptError{"fixture spec " + spec_path.string() + ": " +
                                   spec.error().message()};
            }
            enabled.spec = std::move(spec).value();
        }
        script.plugins.push_back(std::move(enabled));
    }

    std::set<std::string> plugin_ids;
    for (const EnabledPlugin& plugin : script.plugins) {
        plugin_ids.insert(plugin.manifest.plugin_id);
    }

    if (!doc.contains("turns") || !doc.at("turns").is_array() || doc.at("turns").empty()) {
        return ScriptError{"script lists no turns"};
    }
    for (const auto& turn : doc.at("turns")) {
        ScenarioTurn t;
        if (turn.is_string()) {
            t.prompt = turn.get<std::string>();
        } else if (turn.is_object() && turn.contains("prompt")) {
            t.prompt = turn.at("prompt").get<std::string>();
            t.plugin_response = turn.value("plugin_response", "");
        } else {
            return ScriptError{"turns must be strings or objects with a prompt"};
        }
        script.turns.push_back(std::move(t));
    }

    if (doc.contains("assertions")) {
        if (!doc.at("assertions").is_array()) {
            return ScriptError{"assertions must be an array"};
        }
        for (const auto& node : doc.at("assertions")) {
            if (!node.is_object() || !node.contains("type")) {
                return ScriptError{"assertions need a type"};
            }
            ScenarioAssertion a;
            a.type = node.at("type").get<std::string>();
            if (known_assertion_types().count(a.type) == 0) {
                return ScriptError{"unknown assertion type: " + a.type};
            }
            if (node.contains("turn")) {
                a.turn = node.at("turn").get<int>();
                if (*a.turn < 0 || static_cast<std::size_t>(*a.turn) >= script.turns.size()) {
                    return ScriptError{"assertion turn index out of range"};
                }
            }
            if (node.contains("plugin_id")) {
                if (node.at("plugin_id").is_null()) {
                    a.plugin_id = std::nullopt;
                } else {
                    a.plugin_id = node.at("plugin_id").get<std::string>();
                    if (plugin_ids.count(*a.plugin_id) == 0) {
                        return ScriptError{"assertion references unknown plugin: " +
                                           *a.plugin_id};
                    }
                }
            }
            if (node.contains("kind")) {
                const auto kind =
                    directive_kind_from_name(node.at("kind").get<std::string>());
                if (!kind) return ScriptError{"unknown directive kind"};
                a.directive_kind = kind;
            }
            if (node.contains("parameter")) {
                a.parameter = node.at("parameter").get<std::string>();
            }
            if (node.contains("provenance")) {
                a.provenance = node.at("provenance").get<std::string>();
                if (*a.provenance != "this_prompt" && *a.provenance != "conversation_fact") {
                    return ScriptError{"unknown provenance: " + *a.provenance};
                }
            }
            if (node.contains("value")) a.value = node.at("value").get<std::string>();
            if (node.contains("count")) a.count = node.at("count").get<int>();
            if (node.contains("applied")) a.applied = node.at("applied").get<bool>();

            // Required arguments per type.
            if (a.type == "chosen_plugin" && !a.turn) {
                return ScriptError{"chosen_plugin assertion needs a turn"};
            }
            if (a.type == "hijack_count" && (!a.plugin_id || !a.count)) {
                return ScriptError{"hijack_count assertion needs plugin_id and count"};
            }
            if (a.type == "directive_applied" && (!a.plugin_id || !a.directive_kind)) {
                return ScriptError{"directive_applied assertion needs plugin_id and kind"};
            }
            if ((a.type == "parameter_provenance" || a.type == "parameter_absent") &&
                (!a.turn || !a.parameter)) {
                return ScriptError{"parameter assertions need turn and parameter"};
            }
            if (a.type == "parameter_provenance" && !a.provenance) {
                return ScriptError{"parameter_provenance assertion needs provenance"};
            }
            script.assertions.push_back(std::move(a));
        }
    }
    return script;
}

ScenarioReport run_scenario(const ScenarioScript& script) {
    ScenarioReport report;
    report.name = script.name;
    report.isolation = script.isolation;

    SessionState state =
        SessionState::create(script.plugins, script.isolation, script.config);

    int turn_index = 0;
    for (const ScenarioTurn& turn : script.turns) {
        TurnRecord record;
        record.prompt = turn.prompt;
        record.decision = route(turn.prompt, state);
        const std::string response =
            record.decision.chosen_plugin ? turn.plugin_response : std::string();
        record.rendered = render_turn(record.decision, response, state);
        report.turns.push_back(std::move(record));

        for (ConversationFact& fact : extract_facts(turn.prompt, turn_index)) {
            state.conversation_facts.push_back(std::move(fact));
        }
        ++turn_index;
    }

    for (const ScenarioAssertion& assertion : script.assertions) {
        AssertionResult result = evaluate(assertion, report);
        report.passed = report.passed && result.passed;
        report.assertions.push_back(std::move(result));
    }
    return report;
}

std::string ScenarioReport::to_json() const {
    json doc;
    doc["name"] = name;
    doc["isolation"] = isolation_policy_name(isolation);
    doc["passed"] = passed;

    json turns_node = json::array();
    for (const TurnRecord& turn : turns) {
        json t;
        t["prompt"] = turn.prompt;
        t["chosen_plugin"] =
            turn.decision.chosen_plugin ? json(*turn.decision.chosen_plugin) : json(nullptr);
        t["chosen_endpoint"] = turn.decision.chosen_endpoint
                                   ? json(*turn.decision.chosen_endpoint)
                                   : json(nullptr);
        json scores = json::object();
        for (const auto& [plugin_id, score] : turn.decision.scores) {
            scores[plugin_id] = {{"keyword_overlap", score.keyword_overlap},
                                 {"directive_boost", score.directive_boost},
                                 {"brand_match", score.brand_match},
                                 {"total", score.total()}};
        }
        t["scores"] = scores;
        json params = json::object();
        for (const auto& [name_, filled] : turn.decision.filled_parameters) {
            params[name_] = {{"value", filled.value},
                             {"provenance", provenance_name(filled.provenance)}};
        }
        t["filled_parameters"] = params;
        json applied = json::array();
        for (const AppliedDirective& d : turn.rendered.applied_directives) {
            applied.push_back({{"plugin_id", d.plugin_id},
                               {"kind", directive_kind_name(d.directive.kind)},
                               {"value", d.directive.value}});
        }
        t["applied_directives"] = applied;
        t["language_tag"] = turn.rendered.language_tag
                                ? json(*turn.rendered.language_tag)
                                : json(nullptr);
        t["response_text"] = turn.rendered.response_text;
        turns_node.push_back(std::move(t));
    }
    doc["turns"] = turns_node;

    json assertions_node = json::array();
    for (const AssertionResult& a : assertions) {
        assertions_node.push_back(
            {{"description", a.description}, {"passed", a.passed}, {"detail", a.detail}});
    }
    doc["assertions"] = assertions_node;
    return doc.dump(2);
}

std::string ScenarioReport::to_transcript() const {
    std::ostringstream out;
    out << "scenario: " << name << "  (isolation: " << isolation_policy_name(isolation)
        << ")\n";
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const TurnRecord& turn = turns[i];
        out << "\n[turn " << i << "] user: " << turn.prompt << "\n";
        if (turn.decision.chosen_plugin) {
            out << "  -> plugin " << *turn.decision.chosen_plugin;
            if (turn.decision.chosen_endpoint) {
                out << " " << *turn.decision.chosen_endpoint;
            }
            out << "\n";
            for (const auto& [name_, filled] : turn.decision.filled_parameters) {
                out << "     " << name_ << " = " << filled.value << "  ["
                    << provenance_name(filled.provenance) << "]\n";
            }
        } else {
            out << "  -> platform answers alone\n";
        }
        for (const AppliedDirective& d : turn.rendered.applied_directives) {
            out << "  !! directive from " << d.plugin_id << ": "
                << directive_kind_name(d.directive.kind) << "(" << d.directive.value
                << ")\n";
        }
        if (turn.rendered.language_tag) {
            out << "  reply language: " << *turn.rendered.language_tag << "\n";
        }
        if (!turn.rendered.response_text.empty()) {
            out << "  plugin says: " << turn.rendered.response_text << "\n";
        }
    }
    if (!assertions.empty()) {
        out << "\nassertions:\n";
        for (const AssertionResult& a : assertions) {
            out << "  [" << (a.passed ? "pass" : "FAIL") << "] " << a.description;
            if (!a.detail.empty()) out << "  -- " << a.detail;
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace plugaudit
