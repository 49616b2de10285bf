#include "plugaudit/report.hpp"

#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "plugaudit/taxonomy.hpp"

namespace plugaudit {

using nlohmann::json;

namespace {

json finding_to_json(const Finding& finding) {
    json node;
    node["detector_id"] = finding.detector_id;
    node["coordinate"] = {
        {"stakeholders", stakeholders_name(finding.coordinate.stakeholders())},
        {"goal_id", finding.coordinate.goal_id()},
        {"method_id", finding.coordinate.method_id()},
    };
    node["severity"] = severity_name(finding.severity);
    node["plugin_ids"] = finding.plugin_ids;
    node["message"] = finding.message;
    json evidence = json::array();
    for (const EvidenceSpan& span : finding.evidence) {
        json e;
        e["location"] = evidence_location_name(span.location);
        e["detail"] = span.detail;
        e["excerpt"] = span.excerpt;
        e["char_range"] = {span.begin, span.end};
        e["plugin_id"] = span.plugin_id;
        evidence.push_back(std::move(e));
    }
    node["evidence"] = evidence;
    return node;
}

std::map<std::string, std::size_t> coverage_counts(const std::vector<Finding>& findings) {
    std::map<std::string, std::size_t> counts;
    for (const TaxonomyEntry& entry : taxonomy_entries()) {
        counts[entry.coordinate.key()] = 0;
    }
    for (const Finding& finding : findings) {
        ++counts[finding.coordinate.key()];
    }
    return counts;
}

}  // namespace

AuditReport build_audit_report(const Corpus& corpus, std::vector<Finding> findings,
                               const DetectorConfig& config) {
    AuditReport report;
    report.snapshot_id = corpus.snapshot_id;
    report.corpus_stats.plugin_count = corpus.plugins.size();
    for (const CorpusEntry& entry : corpus.plugins) {
        if (entry.spec) ++report.corpus_stats.spec_count;
    }
    report.corpus_stats.fetch_error_count = corpus.fetch_errors.size();
    report.findings = std::move(findings);
    report.config_echo = config;
    return report;
}

std::string emit_report(const AuditReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        json doc;
        doc["snapshot_id"] = report.snapshot_id;
        doc["corpus_stats"] = {
            {"plugin_count", report.corpus_stats.plugin_count},
            {"spec_count", report.corpus_stats.spec_count},
            {"fetch_error_count", report.corpus_stats.fetch_error_count},
        };
        json findings = json::array();
        for (const Finding& finding : report.findings) {
            findings.push_back(finding_to_json(finding));
        }
        doc["findings"] = findings;
        json coverage = json::object();
        for (const auto& [key, count] : coverage_counts(report.findings)) {
            coverage[key] = count;
        }
        doc["taxonomy_coverage"] = coverage;
        doc["config_echo"] =
            json::parse(detector_config_to_json(report.config_echo));
        return doc.dump(2) + "\n";
    }

    // Markdown form.
    std::ostringstream out;
    out << "# Plugin audit report\n\n";
    out << "snapshot: `" << report.snapshot_id << "`  \n";
    out << "plugins: " << report.corpus_stats.plugin_count
        << ", specs: " << report.corpus_stats.spec_count
        << ", fetch errors: " << report.corpus_stats.fetch_error_count << "\n\n";

    const std::map<std::string, std::size_t> coverage = coverage_counts(report.findings);
    out << "## Coverage\n\n";
    out << "| Stakeholders | Attacker goal | Attack method | Findings |\n";
    out << "|---|---|---|---|\n";
    for (const TaxonomyEntry& entry : taxonomy_entries()) {
        out << "| " << stakeholders_display_name(entry.coordinate.stakeholders()) << " | "
            << entry.goal_label << " | " << entry.method_label << " | "
            << coverage.at(entry.coordinate.key()) << " |\n";
    }

    out << "\n## Findings (" << report.findings.size() << ")\n";
    for (const TaxonomyEntry& entry : taxonomy_entries()) {
        std::vector<const Finding*> in_row;
        for (const Finding& finding : report.findings) {
            if (finding.coordinate == entry.coordinate) in_row.push_back(&finding);
        }
        if (in_row.empty()) continue;
        out << "\n### " << stakeholders_display_name(entry.coordinate.stakeholders())
            << " / " << entry.goal_label << " / " << entry.method_label << "\n\n";
        for (const Finding* finding : in_row) {
            out << "- **" << finding->detector_id << "** [" << severity_name(finding->severity)
                << "] ";
            for (std::size_t i = 0; i < finding->plugin_ids.size(); ++i) {
                out << (i > 0 ? ", " : "") << "`" << finding->plugin_ids[i] << "`";
            }
            out << ": " << finding->message << "\n";
            for (const EvidenceSpan& span : finding->evidence) {
                out << "  - " << evidence_location_name(span.location);
                if (!span.detail.empty()) out << "(" << span.detail << ")";
                out << " [" << span.begin << "," << span.end << "): \"" << span.excerpt
                    << "\"\n";
            }
        }
    }
    if (report.findings.empty()) out << "\nclean: no findings.\n";
    return out.str();
}

int exit_code_for_findings(const std::vector<Finding>& findings, Severity fail_threshold) {
    for (const Finding& finding : findings) {
        if (finding.severity >= fail_threshold) return 1;
    }
    return 0;
}

}  // namespace plugaudit
