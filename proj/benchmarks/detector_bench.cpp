#include <benchmark/benchmark.h>

#include "plugaudit/detectors.hpp"
#include "plugaudit/text.hpp"
#include "plugaudit/report.hpp"
#include "plugaudit/router.hpp"
#include "test_support.hpp"

using namespace plugaudit;

static void BM_RunAll(benchmark::State& state) {
    const Corpus corpus =
        testsupport::synthetic_corpus(static_cast<std::size_t>(state.range(0)), 5);
    const DetectorConfig config;
    for (auto _ : state) {
        auto findings = run_all(corpus, config);
        benchmark::DoNotOptimize(findings.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RunAll)->Arg(16)->Arg(128)->Arg(1024)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_PairSimilarity(benchmark::State& state) {
    const Corpus corpus = testsupport::synthetic_corpus(2, 6);
    std::string body_a = corpus.plugins[0].manifest.description_for_model;
    std::string body_b = corpus.plugins[1].manifest.description_for_model;
    const auto sa = shingle_hashes(body_a);
    const auto sb = shingle_hashes(body_b);
    for (auto _ : state) {
        benchmark::DoNotOptimize(jaccard(sa, sb));
    }
}
BENCHMARK(BM_PairSimilarity);

static void BM_ShingleHashes(benchmark::State& state) {
    std::string text;
    for (int i = 0; i < state.range(0); ++i) text += "token" + std::to_string(i % 37) + " ";
    for (auto _ : state) {
        benchmark::DoNotOptimize(shingle_hashes(text));
    }
}
BENCHMARK(BM_ShingleHashes)->Arg(32)->Arg(256);

static void BM_EmitReport(benchmark::State& state) {
    const Corpus corpus = testsupport::synthetic_corpus(128, 8);
    const DetectorConfig config;
    const AuditReport report =
        build_audit_report(corpus, run_all(corpus, config), config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(emit_report(report, ReportFormat::json));
    }
}
BENCHMARK(BM_EmitReport)->Unit(benchmark::kMicrosecond);

static void BM_Route(benchmark::State& state) {
    const Corpus corpus =
        testsupport::synthetic_corpus(static_cast<std::size_t>(state.range(0)), 9);
    std::vector<EnabledPlugin> plugins;
    for (const CorpusEntry& entry : corpus.plugins) {
        plugins.push_back(EnabledPlugin{entry.manifest, entry.spec});
    }
    const SessionState session =
        SessionState::create(std::move(plugins), IsolationPolicy::none);
    for (auto _ : state) {
        benchmark::DoNotOptimize(route("search weather travel flights for tomorrow", session));
    }
}
BENCHMARK(BM_Route)->Arg(4)->Arg(32);

BENCHMARK_MAIN();
