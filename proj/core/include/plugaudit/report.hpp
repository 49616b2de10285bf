#pragma once

#include <string>
#include <vector>

#include "plugaudit/corpus.hpp"
#include "plugaudit/findings.hpp"

namespace plugaudit {

struct CorpusStats {
    std::size_t plugin_count = 0;
    std::size_t spec_count = 0;
    std::size_t fetch_error_count = 0;
};

/// Aggregated audit output: findings plus a coverage map over every registry
/// coordinate, keyed "stakeholders/goal/method".
struct AuditReport {
    std::string snapshot_id;
    CorpusStats corpus_stats;
    std::vector<Finding> findings;
    DetectorConfig config_echo;
};

AuditReport build_audit_report(const Corpus& corpus, std::vector<Finding> findings,
                               const DetectorConfig& config);

enum class ReportFormat { json, markdown };

/// JSON form is canonical: sorted keys, stable ordering, no timestamps beyond
/// snapshot_id. Markdown renders coverage grouped by stakeholder pair, goal
/// and method in registry order, then the findings.
std::string emit_report(const AuditReport& report, ReportFormat format);

/// 0: no findings at/above the threshold; 1: at least one.
int exit_code_for_findings(const std::vector<Finding>& findings, Severity fail_threshold);

}  // namespace plugaudit
