#include <doctest.h>

#include <algorithm>
#include <limits>
#include <set>

#include "plugaudit/detectors.hpp"
#include "plugaudit/report.hpp"
#include "plugaudit/taxonomy.hpp"
#include "test_support.hpp"

using namespace plugaudit;

namespace {

std::string findings_bytes(const Corpus& corpus, const std::vector<Finding>& findings) {
    AuditReport report = build_audit_report(corpus, findings, DetectorConfig{});
    return emit_report(report, ReportFormat::json);
}

}  // namespace

TEST_CASE("d1 is symmetric and emits one finding per unordered pair") {
    for (unsigned seed : {1u, 2u, 3u, 4u}) {
        Corpus corpus = testsupport::synthetic_corpus(20, seed);

        const auto forward = d1_plugin_squatting(corpus, DetectorConfig{});

        Corpus reversed = corpus;
        std::reverse(reversed.plugins.begin(), reversed.plugins.end());
        auto backward = d1_plugin_squatting(reversed, DetectorConfig{});

        auto canonical = [](std::vector<Finding> f) {
            sort_findings(f);
            return f;
        };
        const auto fa = canonical(forward);
        const auto fb = canonical(backward);
        REQUIRE(fa.size() == fb.size());
        std::set<std::pair<std::string, std::string>> pairs;
        for (std::size_t i = 0; i < fa.size(); ++i) {
            CHECK(fa[i].plugin_ids == fb[i].plugin_ids);
            CHECK(fa[i].message == fb[i].message);
            REQUIRE(fa[i].plugin_ids.size() == 2);
            CHECK(fa[i].plugin_ids[0] < fa[i].plugin_ids[1]);
            CHECK(pairs.emplace(fa[i].plugin_ids[0], fa[i].plugin_ids[1]).second);
        }
    }
}

TEST_CASE("raising the duplicate threshold never adds d1 findings") {
    const Corpus corpus = testsupport::synthetic_corpus(20, 9);
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (double threshold : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        DetectorConfig config;
        config.duplicate_similarity_threshold = threshold;
        const std::size_t count = d1_plugin_squatting(corpus, config).size();
        CHECK(count <= previous);
        previous = count;
    }
}

TEST_CASE("raising the divergence threshold never removes d8 findings") {
    const Corpus corpus = testsupport::synthetic_corpus(20, 10);
    std::size_t previous = 0;
    bool first = true;
    for (double threshold : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        DetectorConfig config;
        config.divergence_threshold = threshold;
        std::size_t divergence_count = 0;
        for (const Finding& f : d8_description_divergence(corpus, config)) {
            if (f.severity == Severity::medium) ++divergence_count;
        }
        if (!first) CHECK(divergence_count >= previous);
        previous = divergence_count;
        first = false;
    }
}

TEST_CASE("evidence is faithful across random corpora") {
    for (unsigned seed : {21u, 22u, 23u}) {
        const Corpus corpus = testsupport::synthetic_corpus(16, seed);
        const auto findings = run_all(corpus, DetectorConfig{});
        for (const Finding& f : findings) {
            CHECK(taxonomy_lookup(f.coordinate) != nullptr);
            REQUIRE_FALSE(f.evidence.empty());
            for (const EvidenceSpan& span : f.evidence) {
                const auto source = evidence_source_text(corpus, f, span);
                REQUIRE_MESSAGE(source.has_value(),
                                f.detector_id << " " << evidence_location_name(span.location)
                                              << " " << span.detail);
                REQUIRE(span.end <= source->size());
                CHECK(source->substr(span.begin, span.end - span.begin) == span.excerpt);
            }
        }
    }
}

TEST_CASE("run_all output is invariant under corpus permutation and parallelism") {
    Corpus corpus = testsupport::synthetic_corpus(14, 33);
    const std::string baseline = findings_bytes(corpus, run_all(corpus, DetectorConfig{}));

    Corpus shuffled = corpus;
    std::mt19937 rng(99);
    std::shuffle(shuffled.plugins.begin(), shuffled.plugins.end(), rng);
    CHECK(findings_bytes(corpus, run_all(shuffled, DetectorConfig{})) == baseline);

    CHECK(findings_bytes(corpus, run_all(corpus, DetectorConfig{}, {}, 4)) == baseline);
    CHECK(findings_bytes(corpus, run_all(corpus, DetectorConfig{}, {}, 1)) == baseline);
}

TEST_CASE("detector config loading validates and lowercases") {
    const auto bad = load_detector_config(R"({"divergence_threshold": 1.5})");
    CHECK_FALSE(bad.ok());

    const auto good = load_detector_config(
        R"({"divergence_threshold": 0.4, "brand_lexicon": ["ACME.example"]})");
    REQUIRE(good.ok());
    CHECK(good.value().divergence_threshold == doctest::Approx(0.4));
    CHECK(good.value().brand_lexicon == std::vector<std::string>{"acme.example"});
    CHECK(good.value().duplicate_similarity_threshold == doctest::Approx(0.9));

    CHECK_FALSE(load_detector_config("not json").ok());
    CHECK_FALSE(load_detector_config(R"({"directive_lexicon": "nope"})").ok());
}
