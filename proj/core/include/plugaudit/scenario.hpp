#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "plugaudit/result.hpp"
#include "plugaudit/router.hpp"

namespace plugaudit {

struct ScriptError {
    std::string message;
};

struct ScenarioTurn {
    std::string prompt;
    std::string plugin_response;  // fixture text returned by whichever plugin is called
};

/// One scripted expectation over the finished scenario.
struct ScenarioAssertion {
    std::string type;
    std::optional<int> turn;
    std::optional<std::string> plugin_id;
    std::optional<DirectiveKind> directive_kind;
    std::optional<std::string> parameter;
    std::optional<std::string> provenance;
    std::optional<std::string> value;
    std::optional<int> count;
    std::optional<bool> applied;
};

struct ScenarioScript {
    std::string name;
    IsolationPolicy isolation = IsolationPolicy::none;
    std::vector<EnabledPlugin> plugins;
    std::vector<ScenarioTurn> turns;
    std::vector<ScenarioAssertion> assertions;
    DetectorConfig config;
};

/// Reads a scenario script (JSON) and its referenced plugin fixtures.
/// Fixture paths resolve relative to the script file. Unknown fixtures,
/// assertion types, plugin ids, or turn indices are script errors.
Result<ScenarioScript, ScriptError> load_scenario_script(const std::filesystem::path& path);

struct AssertionResult {
    std::string description;
    bool passed = false;
    std::string detail;
};

struct TurnRecord {
    std::string prompt;
    RouterDecision decision;
    RenderedTurn rendered;
};

struct ScenarioReport {
    std::string name;
    IsolationPolicy isolation = IsolationPolicy::none;
    std::vector<TurnRecord> turns;
    std::vector<AssertionResult> assertions;
    bool passed = true;

    std::string to_json() const;        // canonical: sorted keys, no timestamps
    std::string to_transcript() const;  // human-readable turn log
};

ScenarioReport run_scenario(const ScenarioScript& script);

}  // namespace plugaudit
