#include <doctest.h>

#include <set>

#include "plugaudit/taxonomy.hpp"

using namespace plugaudit;

TEST_CASE("registry row count matches the hand-pinned table size") {
    // 19 methods between plugin and user, 12 between plugin and platform,
    // 6 between plugins.
    std::size_t user = 0, platform = 0, plugin = 0;
    for (const TaxonomyEntry& e : taxonomy_entries()) {
        switch (e.coordinate.stakeholders()) {
            case Stakeholders::plugin_user: ++user; break;
            case Stakeholders::plugin_platform: ++platform; break;
            case Stakeholders::plugin_plugin: ++plugin; break;
        }
    }
    CHECK(user == 19);
    CHECK(platform == 12);
    CHECK(plugin == 6);
    CHECK(taxonomy_entries().size() == 37);
}

TEST_CASE("goal counts per stakeholder pair") {
    std::set<std::string> user_goals, platform_goals, plugin_goals;
    for (const TaxonomyEntry& e : taxonomy_entries()) {
        switch (e.coordinate.stakeholders()) {
            case Stakeholders::plugin_user: user_goals.insert(e.coordinate.goal_id()); break;
            case Stakeholders::plugin_platform:
                platform_goals.insert(e.coordinate.goal_id());
                break;
            case Stakeholders::plugin_plugin:
                plugin_goals.insert(e.coordinate.goal_id());
                break;
        }
    }
    CHECK(user_goals.size() == 7);
    CHECK(platform_goals.size() == 6);
    CHECK(plugin_goals.size() == 3);
}

TEST_CASE("lookup resolves slug pairs uniquely") {
    const TaxonomyEntry* topic = taxonomy_lookup("hijack-prompts-on-topic", "squat-a-topic");
    REQUIRE(topic != nullptr);
    CHECK(topic->example_risk_label == "Topic squatting");
    CHECK(topic->coordinate.stakeholders() == Stakeholders::plugin_plugin);

    CHECK(taxonomy_lookup("", "") == nullptr);
    CHECK(taxonomy_lookup("hijack-user-account", "no-such-method") == nullptr);

    // (goal, method) is a key: each slug pair occurs exactly once.
    std::set<std::pair<std::string, std::string>> seen;
    for (const TaxonomyEntry& e : taxonomy_entries()) {
        CHECK(seen.emplace(e.coordinate.goal_id(), e.coordinate.method_id()).second);
    }
}

TEST_CASE("coordinates outside the registry cannot be made") {
    CHECK_FALSE(TaxonomyCoordinate::make(Stakeholders::plugin_user, "made-up", "also-made-up")
                    .has_value());
    const auto real = TaxonomyCoordinate::make(Stakeholders::plugin_user,
                                               "hijack-user-account", "squat-another-plugin");
    REQUIRE(real.has_value());
    CHECK(real->key() == "plugin_user/hijack-user-account/squat-another-plugin");
    CHECK(taxonomy_lookup(*real) != nullptr);
}

TEST_CASE("static-detectable listing is a strict subset with the expected rows") {
    const auto statics = list_static_detectable();
    CHECK(statics.size() < taxonomy_entries().size());

    auto contains = [&](const char* goal, const char* method) {
        for (const TaxonomyEntry& e : statics) {
            if (e.coordinate.goal_id() == goal && e.coordinate.method_id() == method) {
                return true;
            }
        }
        return false;
    };
    CHECK(contains("hijack-llm-platform", "inject-malicious-description"));
    CHECK_FALSE(contains("steal-plugin-data", "make-ghost-requests"));

    for (const TaxonomyEntry& e : statics) {
        CHECK(taxonomy_lookup(e.coordinate) != nullptr);
    }
}

TEST_CASE("observed risks sit on their table rows") {
    const std::set<std::string> expected = {
        "Credential exfiltration", "Plugin squatting",      "History sniffing",
        "LLM session hijack",      "Plugin response hallucination",
        "Functionality squatting", "Topic squatting",
    };
    std::set<std::string> actual;
    for (const TaxonomyEntry& e : taxonomy_entries()) {
        if (e.example_risk_label) actual.insert(*e.example_risk_label);
    }
    CHECK(actual == expected);
}

TEST_CASE("registry serialization is stable") {
    CHECK(taxonomy_to_json() == taxonomy_to_json());
    CHECK(taxonomy_to_json().find("squat-a-topic") != std::string::npos);
}

TEST_CASE("duplicate-looking rows stay distinct across stakeholder pairs") {
    const TaxonomyEntry* user_row =
        taxonomy_lookup("hijack-user-account", "squat-another-plugin");
    const TaxonomyEntry* plugin_row =
        taxonomy_lookup("hijack-another-plugins-prompts", "squat-another-plugin");
    REQUIRE(user_row != nullptr);
    REQUIRE(plugin_row != nullptr);
    CHECK(user_row->coordinate.stakeholders() != plugin_row->coordinate.stakeholders());
}
