#include "plugaudit/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "plugaudit/crawler.hpp"
#include "plugaudit/detectors.hpp"
#include "plugaudit/report.hpp"
#include "plugaudit/scenario.hpp"
#include "plugaudit/taxonomy.hpp"

namespace plugaudit {

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

bool write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return true;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return false;
    }
    out << content;
    return static_cast<bool>(out);
}

std::optional<DetectorConfig> load_config_or_default(const std::string& config_path) {
    if (config_path.empty()) return DetectorConfig{};
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot read config " << config_path << "\n";
        return std::nullopt;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto config = load_detector_config(text);
    if (!config.ok()) {
        std::cerr << "config error: " << config.error().message() << "\n";
        return std::nullopt;
    }
    return std::move(config).value();
}

std::optional<Corpus> acquire_corpus(const std::string& dump_path,
                                     const std::string& index_url, double rate,
                                     int parallel) {
    if (!dump_path.empty()) {
        auto corpus = load_dump(dump_path);
        if (!corpus.ok()) {
            std::cerr << "dump error: " << corpus.error().reason << "\n";
            return std::nullopt;
        }
        return std::move(corpus).value();
    }
    if (index_url.empty()) {
        std::cerr << "need --dump or --index-url\n";
        return std::nullopt;
    }
    try {
        CrawlOptions options;
        options.requests_per_second = rate;
        options.parallelism = parallel;
        return crawl_store(index_url, options);
    } catch (const IndexUnreachableError& e) {
        std::cerr << e.what() << "\n";
        return std::nullopt;
    }
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Security auditor and routing simulator for LLM-platform plugin ecosystems"};
    app.require_subcommand(1);

    // crawl
    auto* crawl = app.add_subcommand("crawl", "Fetch a store index into a corpus dump");
    std::string crawl_index_url;
    std::string crawl_out;
    double crawl_rate = 2.0;
    int crawl_parallel = 8;
    crawl->add_option("--index-url", crawl_index_url, "Store index URL")->required();
    crawl->add_option("--out", crawl_out, "Dump directory to write")->required();
    crawl->add_option("--rate", crawl_rate, "Requests per second");
    crawl->add_option("--parallel", crawl_parallel, "Fetches in flight");

    // audit
    auto* audit = app.add_subcommand("audit", "Run the detector battery over a corpus");
    std::string audit_dump, audit_index_url, audit_config, audit_out;
    std::string audit_format = "json";
    std::string audit_fail_on = "high";
    double audit_rate = 2.0;
    int audit_parallel = 1;
    audit->add_option("--dump", audit_dump, "Corpus dump directory");
    audit->add_option("--index-url", audit_index_url, "Crawl this index instead of a dump");
    audit->add_option("--config", audit_config, "Detector config (JSON)");
    audit->add_option("--format", audit_format, "json|markdown")
        ->check(CLI::IsMember({"json", "markdown"}));
    audit->add_option("--fail-on", audit_fail_on, "info|low|medium|high")
        ->check(CLI::IsMember({"info", "low", "medium", "high"}));
    audit->add_option("--out", audit_out, "Write the report here (default stdout)");
    audit->add_option("--rate", audit_rate, "Requests per second when crawling");
    audit->add_option("--parallel", audit_parallel, "Detector/crawl parallelism");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a scenario script");
    std::string sim_script, sim_out, sim_transcript;
    simulate->add_option("script", sim_script, "Scenario script (JSON)")->required();
    simulate->add_option("--out", sim_out, "Write the scenario report here");
    simulate->add_option("--transcript", sim_transcript, "Write the transcript here");

    // diff
    auto* diff = app.add_subcommand("diff", "Diff two corpus dumps and audit the drift");
    std::string diff_older, diff_newer, diff_out;
    std::string diff_format = "json";
    std::string diff_fail_on = "high";
    diff->add_option("older", diff_older, "Older dump directory")->required();
    diff->add_option("newer", diff_newer, "Newer dump directory")->required();
    diff->add_option("--format", diff_format, "json|markdown")
        ->check(CLI::IsMember({"json", "markdown"}));
    diff->add_option("--fail-on", diff_fail_on, "info|low|medium|high")
        ->check(CLI::IsMember({"info", "low", "medium", "high"}));
    diff->add_option("--out", diff_out, "Write the report here (default stdout)");

    // taxonomy
    auto* taxonomy = app.add_subcommand("taxonomy", "Export the attack-surface registry");
    std::string taxonomy_out;
    taxonomy->add_option("--out", taxonomy_out, "Write the registry here (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kExitClean;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }

    try {
        if (crawl->parsed()) {
            CrawlOptions options;
            options.requests_per_second = crawl_rate;
            options.parallelism = crawl_parallel;
            options.cache_dir = std::filesystem::path(crawl_out) / "cache";
            Corpus corpus;
            try {
                corpus = crawl_store(crawl_index_url, options);
            } catch (const IndexUnreachableError& e) {
                std::cerr << e.what() << "\n";
                return kExitError;
            }
            std::string error;
            if (!save_dump(corpus, crawl_out, &error)) {
                std::cerr << error << "\n";
                return kExitError;
            }
            std::cout << "snapshot " << corpus.snapshot_id << ": " << corpus.plugins.size()
                      << " plugins, " << corpus.fetch_errors.size() << " fetch errors -> "
                      << crawl_out << "\n";
            return kExitClean;
        }

        if (audit->parsed()) {
            const auto config = load_config_or_default(audit_config);
            if (!config) return kExitError;
            const auto corpus =
                acquire_corpus(audit_dump, audit_index_url, audit_rate, audit_parallel);
            if (!corpus) return kExitError;

            std::vector<Finding> findings =
                run_all(*corpus, *config, {}, audit_parallel);
            const AuditReport report = build_audit_report(*corpus, std::move(findings), *config);
            const ReportFormat format =
                audit_format == "markdown" ? ReportFormat::markdown : ReportFormat::json;
            if (!write_output(audit_out, emit_report(report, format))) return kExitError;
            return exit_code_for_findings(report.findings,
                                          *severity_from_name(audit_fail_on));
        }

        if (simulate->parsed()) {
            auto script = load_scenario_script(sim_script);
            if (!script.ok()) {
                std::cerr << "script error: " << script.error().message << "\n";
                return kExitError;
            }
            const ScenarioReport report = run_scenario(script.value());
            if (!write_output(sim_out, report.to_json())) return kExitError;
            if (!sim_transcript.empty() &&
                !write_output(sim_transcript, report.to_transcript())) {
                return kExitError;
            }
            if (sim_out.empty()) std::cout << "\n" << report.to_transcript();
            return report.passed ? kExitClean : kExitFindings;
        }

        if (diff->parsed()) {
            auto older = load_dump(diff_older);
            if (!older.ok()) {
                std::cerr << "dump error: " << older.error().reason << "\n";
                return kExitError;
            }
            auto newer = load_dump(diff_newer);
            if (!newer.ok()) {
                std::cerr << "dump error: " << newer.error().reason << "\n";
                return kExitError;
            }
            const std::vector<DriftRecord> drift =
                diff_snapshots(older.value(), newer.value());
            std::vector<Finding> findings = d10_manifest_drift(drift, &newer.value());
            sort_findings(findings);
            const AuditReport report =
                build_audit_report(newer.value(), std::move(findings), DetectorConfig{});
            const ReportFormat format =
                diff_format == "markdown" ? ReportFormat::markdown : ReportFormat::json;
            if (!write_output(diff_out, emit_report(report, format))) return kExitError;
            return exit_code_for_findings(report.findings,
                                          *severity_from_name(diff_fail_on));
        }

        if (taxonomy->parsed()) {
            if (!write_output(taxonomy_out, taxonomy_to_json() + "\n")) return kExitError;
            return kExitClean;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }

    std::cerr << "no subcommand\n";
    return kExitError;
}

}  // namespace plugaudit
