#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "plugaudit/manifest.hpp"
#include "test_support.hpp"

using namespace plugaudit;

namespace {

std::string read_fixture(const std::string& rel) {
    std::ifstream in(testsupport::fixture_dir() + "/" + rel, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("parses a complete store manifest") {
    const auto parsed =
        parse_manifest(read_fixture("paper_corpus/manifests/kayak@kayak.com.json"),
                       "kayak.com");
    REQUIRE(parsed.ok());
    const PluginManifest& m = parsed.value();
    CHECK(m.name_for_model == "KAYAK");
    CHECK(m.name_for_human == "KAYAK");
    CHECK(m.auth.type == AuthType::none);
    CHECK(m.api_url == "https://www.kayak.com/.well-known/openapi.yaml");
    CHECK(m.plugin_id == "kayak@kayak.com");
    CHECK(m.schema_version == "v1");
    CHECK(m.description_for_model.rfind("Search flights", 0) == 0);
    // The api.type member is not modeled; it must survive as an extra.
    REQUIRE(m.extra_fields.count("api") == 1);
    CHECK(m.extra_fields.at("api").find("openapi") != std::string::npos);
}

TEST_CASE("empty document is missing its required name") {
    const auto parsed = parse_manifest("{}", "h.example");
    REQUIRE_FALSE(parsed.ok());
    CHECK(parsed.error().code == ParseErrorCode::missing_required_field);
    CHECK(parsed.error().detail == "name_for_model");
}

TEST_CASE("whitespace-only name is treated as missing") {
    const auto parsed = parse_manifest(
        R"({"name_for_model": "  ", "api": {"url": "https://x.example/a"}})", "x.example");
    REQUIRE_FALSE(parsed.ok());
    CHECK(parsed.error().code == ParseErrorCode::missing_required_field);
}

TEST_CASE("non-url api endpoint is rejected") {
    const auto parsed = parse_manifest(
        R"({"name_for_model": "X", "api": {"url": "plugin_spec_url"}})", "x.example");
    REQUIRE_FALSE(parsed.ok());
    CHECK(parsed.error().code == ParseErrorCode::invalid_url);
    CHECK(parsed.error().detail == "api.url");
}

TEST_CASE("garbage input is a malformed document") {
    CHECK_FALSE(parse_manifest("not json at all", "x.example").ok());
    CHECK_FALSE(parse_manifest("[1,2,3]", "x.example").ok());
}

TEST_CASE("unrecognized auth types are preserved verbatim") {
    // Hand corpus of auth variants; every non-enum string must survive a
    // serialize/parse round trip unchanged.
    const std::vector<std::pair<std::string, AuthType>> corpus = {
        {"none", AuthType::none},
        {"user_http", AuthType::user_http},
        {"service_http", AuthType::service_http},
        {"oauth", AuthType::oauth},
        {"oauth_v9", AuthType::other},
    };
    for (const auto& [type_string, expected] : corpus) {
        const std::string text = R"({"name_for_model": "X", "auth": {"type": ")" +
                                 type_string +
                                 R"("}, "api": {"url": "https://x.example/a"}})";
        const auto parsed = parse_manifest(text, "x.example");
        REQUIRE(parsed.ok());
        CHECK(parsed.value().auth.type == expected);
        CHECK(parsed.value().auth.type_string() == type_string);

        const auto reparsed =
            parse_manifest(serialize_manifest(parsed.value()), "x.example");
        REQUIRE(reparsed.ok());
        CHECK(reparsed.value() == parsed.value());
    }
}

TEST_CASE("unknown fields round-trip structurally") {
    const std::string text = R"({
        "name_for_model": "Widget",
        "api": {"type": "openapi", "url": "https://w.example/spec", "version": 2},
        "auth": {"type": "oauth", "scope": "read", "flags": {"pkce": true}},
        "store_rank": 17,
        "labels": ["a", "b"]
    })";
    const auto first = parse_manifest(text, "w.example");
    REQUIRE(first.ok());
    CHECK(first.value().extra_fields.count("store_rank") == 1);
    CHECK(first.value().extra_fields.count("labels") == 1);
    CHECK(first.value().auth.raw.at("scope") == "read");

    const auto second = parse_manifest(serialize_manifest(first.value()), "w.example");
    REQUIRE(second.ok());
    CHECK(second.value() == first.value());
}

TEST_CASE("round-trip holds across generated manifests") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coin(0, 1);
    const std::vector<std::string> auth_types = {"none", "oauth", "weird_auth_v2"};
    for (int i = 0; i < 30; ++i) {
        PluginManifest m = testsupport::make_manifest(
            "Gen" + std::to_string(i), "gen" + std::to_string(i) + ".example",
            "Description number " + std::to_string(i),
            coin(rng) ? "" : "A different human text " + std::to_string(i),
            auth_types[static_cast<std::size_t>(i) % auth_types.size()]);
        if (coin(rng)) m.extra_fields["custom_" + std::to_string(i)] = "\"v\"";
        if (coin(rng)) m.logo_url = "https://gen.example/logo.png";
        if (coin(rng)) m.contact_email = "x@gen.example";

        const auto reparsed = parse_manifest(serialize_manifest(m), m.source_host);
        REQUIRE(reparsed.ok());
        CHECK(reparsed.value() == m);
    }
}

TEST_CASE("plugin ids are lowercase name at host") {
    CHECK(make_plugin_id("KAYAK", "kayak.com") == "kayak@kayak.com");
    CHECK(make_plugin_id("LexiShopper", "getlexi.example") ==
          "lexishopper@getlexi.example");
}
