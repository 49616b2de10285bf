#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "plugaudit/scenario.hpp"
#include "test_support.hpp"

using namespace plugaudit;
namespace fs = std::filesystem;

namespace {

fs::path scenario_path(const std::string& name) {
    return fs::path(testsupport::fixture_dir()) / "scenarios" / name;
}

}  // namespace

TEST_CASE("loads and runs the bundled scenarios") {
    for (const char* name :
         {"topic_squat.json", "session_hijack_none.json", "session_hijack_isolated.json",
          "fact_leak.json", "fact_leak_empty.json"}) {
        auto script = load_scenario_script(scenario_path(name));
        REQUIRE_MESSAGE(script.ok(), name);
        const ScenarioReport report = run_scenario(script.value());
        CHECK_MESSAGE(report.passed, name);
        for (const AssertionResult& a : report.assertions) {
            CHECK_MESSAGE(a.passed, name << ": " << a.description << " " << a.detail);
        }
    }
}

TEST_CASE("scenario reports are deterministic byte for byte") {
    auto script = load_scenario_script(scenario_path("topic_squat.json"));
    REQUIRE(script.ok());
    const std::string a = run_scenario(script.value()).to_json();
    const std::string b = run_scenario(script.value()).to_json();
    CHECK(a == b);
}

TEST_CASE("a scenario without plugins routes nothing") {
    ScenarioScript script;
    script.name = "empty";
    script.turns.push_back(ScenarioTurn{"find flights to Boston", ""});
    script.turns.push_back(ScenarioTurn{"weather in Oslo", ""});
    const ScenarioReport report = run_scenario(script);
    for (const TurnRecord& turn : report.turns) {
        CHECK_FALSE(turn.decision.chosen_plugin.has_value());
    }
}

TEST_CASE("script errors: missing file and bad references") {
    CHECK_FALSE(load_scenario_script(scenario_path("does_not_exist.json")).ok());

    const fs::path dir = fs::temp_directory_path() / "plugaudit_scripts";
    fs::create_directories(dir);

    {
        std::ofstream out(dir / "bad_fixture.json");
        out << R"({"name": "x", "plugins": [{"manifest": "missing.json",
                 "source_host": "x.example"}], "turns": ["hello"]})";
    }
    auto missing_fixture = load_scenario_script(dir / "bad_fixture.json");
    REQUIRE_FALSE(missing_fixture.ok());
    CHECK(missing_fixture.error().message.find("unknown fixture") != std::string::npos);

    {
        std::ofstream out(dir / "manifest.json");
        out << R"({"name_for_model": "X", "api": {"url": "https://x.example/a"}})";
    }
    {
        std::ofstream out(dir / "bad_assert.json");
        out << R"({"name": "x",
                   "plugins": [{"manifest": "manifest.json", "source_host": "x.example"}],
                   "turns": ["hello"],
                   "assertions": [{"type": "no_such_assertion"}]})";
    }
    auto bad_assert = load_scenario_script(dir / "bad_assert.json");
    REQUIRE_FALSE(bad_assert.ok());
    CHECK(bad_assert.error().message.find("unknown assertion") != std::string::npos);

    {
        std::ofstream out(dir / "bad_plugin_ref.json");
        out << R"({"name": "x",
                   "plugins": [{"manifest": "manifest.json", "source_host": "x.example"}],
                   "turns": ["hello"],
                   "assertions": [{"type": "hijack_count",
                                   "plugin_id": "ghost@ghost.example", "count": 1}]})";
    }
    auto bad_ref = load_scenario_script(dir / "bad_plugin_ref.json");
    REQUIRE_FALSE(bad_ref.ok());
    CHECK(bad_ref.error().message.find("unknown plugin") != std::string::npos);

    {
        std::ofstream out(dir / "bad_turn.json");
        out << R"({"name": "x",
                   "plugins": [{"manifest": "manifest.json", "source_host": "x.example"}],
                   "turns": ["hello"],
                   "assertions": [{"type": "chosen_plugin", "turn": 7}]})";
    }
    auto bad_turn = load_scenario_script(dir / "bad_turn.json");
    REQUIRE_FALSE(bad_turn.ok());
    CHECK(bad_turn.error().message.find("out of range") != std::string::npos);

    fs::remove_all(dir);
}

TEST_CASE("failing assertions mark the report failed") {
    auto script = load_scenario_script(scenario_path("fact_leak_empty.json"));
    REQUIRE(script.ok());
    ScenarioScript mutated = std::move(script).value();
    ScenarioAssertion impossible;
    impossible.type = "hijack_count";
    impossible.plugin_id = mutated.plugins[0].manifest.plugin_id;
    impossible.count = 99;
    mutated.assertions.push_back(impossible);

    const ScenarioReport report = run_scenario(mutated);
    CHECK_FALSE(report.passed);
}

TEST_CASE("the transcript narrates turns and directives") {
    auto script = load_scenario_script(scenario_path("session_hijack_none.json"));
    REQUIRE(script.ok());
    const ScenarioReport report = run_scenario(script.value());
    const std::string transcript = report.to_transcript();
    CHECK(transcript.find("[turn 0]") != std::string::npos);
    CHECK(transcript.find("reply_language(en)") != std::string::npos);
    CHECK(transcript.find("skycast@skycast.example") != std::string::npos);
}
