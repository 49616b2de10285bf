#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plugaudit/api_spec.hpp"
#include "plugaudit/manifest.hpp"
#include "plugaudit/result.hpp"

namespace plugaudit {

struct FetchError {
    std::string url;
    std::string reason;

    bool operator==(const FetchError&) const = default;
};

/// A redirect that crossed hosts while fetching a plugin resource.
struct RedirectNotice {
    std::string from_url;
    std::string to_url;

    bool operator==(const RedirectNotice&) const = default;
};

struct CorpusEntry {
    PluginManifest manifest;
    std::optional<ApiSpecification> spec;  // absent only with a recorded FetchError
    std::optional<std::string> spec_raw_text;
    std::optional<std::string> privacy_policy_text;
    std::string retrieved_at;  // ISO-8601 UTC
    std::vector<RedirectNotice> redirect_notices;

    bool operator==(const CorpusEntry&) const = default;
};

/// A dated, immutable snapshot of plugins. Entries are unique by plugin_id
/// and sorted by it.
struct Corpus {
    std::string snapshot_id;
    std::vector<CorpusEntry> plugins;
    std::vector<std::pair<std::string, FetchError>> fetch_errors;  // (plugin_id, error)

    const CorpusEntry* find(std::string_view plugin_id) const;
    void finalize();  // sorts entries and fetch errors
};

struct DumpError {
    std::string reason;
};

/// On-disk layout:
///   <root>/index.json            list of manifest file names
///   <root>/manifests/<id>.json
///   <root>/specs/<id>.{yaml|json}
///   <root>/policies/<id>.txt
///   <root>/meta.json             snapshot_id, retrieved_at map, redirects
Result<Corpus, DumpError> load_dump(const std::filesystem::path& root);

bool save_dump(const Corpus& corpus, const std::filesystem::path& root,
               std::string* error = nullptr);

enum class DriftKind { added, removed, changed };

enum class DriftField {
    description_for_model,
    description_for_human,
    api_url,
    auth_type,
    endpoint_set,
    schema_property_set,
    name_for_human,
    logo_url,
    contact_email,
    legal_info_url,
    schema_version,
};

std::string drift_kind_name(DriftKind kind);
std::string drift_field_name(DriftField field);

struct DriftRecord {
    std::string plugin_id;
    DriftKind kind = DriftKind::changed;
    std::vector<DriftField> changed_fields;  // empty for added/removed

    bool operator==(const DriftRecord&) const = default;
};

/// Field-level differences between two snapshots, ordered by plugin_id.
std::vector<DriftRecord> diff_snapshots(const Corpus& older, const Corpus& newer);

/// "YYYYMMDDThhmmssZ" for the current wall clock.
std::string utc_timestamp_now();

}  // namespace plugaudit
