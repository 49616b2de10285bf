#include "plugaudit/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace plugaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<std::string> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    return static_cast<bool>(out);
}

std::string host_from_plugin_id(const std::string& plugin_id) {
    const std::size_t at = plugin_id.rfind('@');
    if (at == std::string::npos) return "";
    return plugin_id.substr(at + 1);
}

// Deterministic fingerprints of the callable surface, for drift comparison.
std::set<std::string> endpoint_fingerprints(const ApiSpecification& spec) {
    std::set<std::string> out;
    for (const Endpoint& ep : spec.endpoints) {
        out.insert(ep.method_string + " " + ep.path);
    }
    return out;
}

std::set<std::string> property_fingerprints(const ApiSpecification& spec) {
    std::set<std::string> out;
    for (const FlatProperty& f : flatten_properties(spec)) {
        out.insert(f.endpoint_path + "#" + f.property_path + ":" +
                   f.property->declared_type +
                   (f.property->description ? "|" + *f.property->description : ""));
    }
    return out;
}

}  // namespace

const CorpusEntry* Corpus::find(std::string_view plugin_id) const {
    for (const CorpusEntry& entry : plugins) {
        if (entry.manifest.plugin_id == plugin_id) return &entry;
    }
    return nullptr;
}

void Corpus::finalize() {
    std::sort(plugins.begin(), plugins.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) {
                  return a.manifest.plugin_id < b.manifest.plugin_id;
              });
    std::sort(fetch_errors.begin(), fetch_errors.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return a.second.url < b.second.url;
              });
}

Result<Corpus, DumpError> load_dump(const fs::path& root) {
    const auto index_text = read_file(root / "index.json");
    if (!index_text) {
        return DumpError{"missing index file: " + (root / "index.json").string()};
    }
    const json index = json::parse(*index_text, nullptr, /*allow_exceptions=*/false);
    if (index.is_discarded() || !index.is_array()) {
        return DumpError{"index.json is not a JSON array"};
    }

    Corpus corpus;
    corpus.snapshot_id = "unknown-snapshot";
    json meta;
    if (const auto meta_text = read_file(root / "meta.json")) {
        meta = json::parse(*meta_text, nullptr, /*allow_exceptions=*/false);
        if (!meta.is_discarded() && meta.is_object()) {
            if (meta.contains("snapshot_id") && meta.at("snapshot_id").is_string()) {
                corpus.snapshot_id = meta.at("snapshot_id").get<std::string>();
            }
        }
    }

    std::set<std::string> seen_ids;
    for (const auto& entry : index) {
        if (!entry.is_string()) continue;
        const std::string file_name = entry.get<std::string>();
        const std::string stem = fs::path(file_name).stem().string();

        const auto manifest_text = read_file(root / "manifests" / file_name);
        if (!manifest_text) {
            corpus.fetch_errors.emplace_back(
                stem, FetchError{"manifests/" + file_name, "missing manifest file"});
            continue;
        }
        auto parsed = parse_manifest(*manifest_text, host_from_plugin_id(stem));
        if (!parsed.ok()) {
            corpus.fetch_errors.emplace_back(
                stem, FetchError{"manifests/" + file_name, parsed.error().message()});
            continue;
        }

        CorpusEntry corpus_entry;
        corpus_entry.manifest = std::move(parsed).value();
        const std::string& id = corpus_entry.manifest.plugin_id;
        if (!seen_ids.insert(id).second) {
            corpus.fetch_errors.emplace_back(
                id, FetchError{"manifests/" + file_name, "duplicate plugin_id in dump"});
            continue;
        }

        bool spec_loaded = false;
        for (const char* ext : {".yaml", ".yml", ".json"}) {
            const fs::path spec_path = root / "specs" / (id + ext);
            if (const auto spec_text = read_file(spec_path)) {
                auto spec = parse_api_spec(*spec_text);
                if (spec.ok()) {
                    corpus_entry.spec = std::move(spec).value();
                    corpus_entry.spec_raw_text = *spec_text;
                } else {
                    corpus.fetch_errors.emplace_back(
                        id, FetchError{"specs/" + id + ext, spec.error().message()});
                }
                spec_loaded = true;
                break;
            }
        }
        if (!spec_loaded) {
            corpus.fetch_errors.emplace_back(
                id, FetchError{"specs/" + id, "missing spec file"});
        }

        if (const auto policy = read_file(root / "policies" / (id + ".txt"))) {
            corpus_entry.privacy_policy_text = *policy;
        }

        if (meta.is_object() && meta.contains("retrieved_at") &&
            meta.at("retrieved_at").is_object() && meta.at("retrieved_at").contains(id) &&
            meta.at("retrieved_at").at(id).is_string()) {
            corpus_entry.retrieved_at = meta.at("retrieved_at").at(id).get<std::string>();
        }
        if (meta.is_object() && meta.contains("redirects") &&
            meta.at("redirects").is_object() && meta.at("redirects").contains(id) &&
            meta.at("redirects").at(id).is_array()) {
            for (const auto& r : meta.at("redirects").at(id)) {
                if (r.is_object() && r.contains("from") && r.contains("to")) {
                    corpus_entry.redirect_notices.push_back(RedirectNotice{
                        r.at("from").get<std::string>(), r.at("to").get<std::string>()});
                }
            }
        }
        corpus.plugins.push_back(std::move(corpus_entry));
    }

    corpus.finalize();
    return corpus;
}

bool save_dump(const Corpus& corpus, const fs::path& root, std::string* error) {
    std::error_code ec;
    fs::create_directories(root / "manifests", ec);
    fs::create_directories(root / "specs", ec);
    fs::create_directories(root / "policies", ec);
    if (ec) {
        if (error) *error = "cannot create dump directories: " + ec.message();
        return false;
    }

    json index = json::array();
    json retrieved_at = json::object();
    json redirects = json::object();

    for (const CorpusEntry& entry : corpus.plugins) {
        const std::string& id = entry.manifest.plugin_id;
        const std::string file_name = id + ".json";
        index.push_back(file_name);
        if (!write_file(root / "manifests" / file_name,
                        serialize_manifest(entry.manifest))) {
            if (error) *error = "cannot write manifest for " + id;
            return false;
        }
        if (entry.spec_raw_text) {
            const char* ext =
                entry.spec && entry.spec->raw_format == SpecFormat::json ? ".json" : ".yaml";
            if (!write_file(root / "specs" / (id + ext), *entry.spec_raw_text)) {
                if (error) *error = "cannot write spec for " + id;
                return false;
            }
        }
        if (entry.privacy_policy_text) {
            if (!write_file(root / "policies" / (id + ".txt"),
                            *entry.privacy_policy_text)) {
                if (error) *error = "cannot write policy for " + id;
                return false;
            }
        }
        retrieved_at[id] = entry.retrieved_at;
        if (!entry.redirect_notices.empty()) {
            json list = json::array();
            for (const RedirectNotice& notice : entry.redirect_notices) {
                list.push_back({{"from", notice.from_url}, {"to", notice.to_url}});
            }
            redirects[id] = list;
        }
    }

    json meta = json::object();
    meta["snapshot_id"] = corpus.snapshot_id;
    meta["retrieved_at"] = retrieved_at;
    if (!redirects.empty()) meta["redirects"] = redirects;

    if (!write_file(root / "index.json", index.dump(2)) ||
        !write_file(root / "meta.json", meta.dump(2))) {
        if (error) *error = "cannot write index/meta";
        return false;
    }
    return true;
}

std::string drift_kind_name(DriftKind kind) {
    switch (kind) {
        case DriftKind::added: return "added";
        case DriftKind::removed: return "removed";
        case DriftKind::changed: return "changed";
    }
    return "changed";
}

std::string drift_field_name(DriftField field) {
    switch (field) {
        case DriftField::description_for_model: return "description_for_model";
        case DriftField::description_for_human: return "description_for_human";
        case DriftField::api_url: return "api_url";
        case DriftField::auth_type: return "auth_type";
        case DriftField::endpoint_set: return "endpoint_set";
        case DriftField::schema_property_set: return "schema_property_set";
        case DriftField::name_for_human: return "name_for_human";
        case DriftField::logo_url: return "logo_url";
        case DriftField::contact_email: return "contact_email";
        case DriftField::legal_info_url: return "legal_info_url";
        case DriftField::schema_version: return "schema_version";
    }
    return "unknown";
}

std::vector<DriftRecord> diff_snapshots(const Corpus& older, const Corpus& newer) {
    std::vector<DriftRecord> records;

    for (const CorpusEntry& old_entry : older.plugins) {
        const CorpusEntry* new_entry = newer.find(old_entry.manifest.plugin_id);
        if (new_entry == nullptr) {
            records.push_back(
                DriftRecord{old_entry.manifest.plugin_id, DriftKind::removed, {}});
            continue;
        }

        std::vector<DriftField> changed;
        const PluginManifest& a = old_entry.manifest;
        const PluginManifest& b = new_entry->manifest;
        if (a.description_for_model != b.description_for_model) {
            changed.push_back(DriftField::description_for_model);
        }
        if (a.description_for_human != b.description_for_human) {
            changed.push_back(DriftField::description_for_human);
        }
        if (a.api_url != b.api_url) changed.push_back(DriftField::api_url);
        if (a.auth.type_string() != b.auth.type_string()) {
            changed.push_back(DriftField::auth_type);
        }
        if (a.name_for_human != b.name_for_human) {
            changed.push_back(DriftField::name_for_human);
        }
        if (a.logo_url != b.logo_url) changed.push_back(DriftField::logo_url);
        if (a.contact_email != b.contact_email) {
            changed.push_back(DriftField::contact_email);
        }
        if (a.legal_info_url != b.legal_info_url) {
            changed.push_back(DriftField::legal_info_url);
        }
        if (a.schema_version != b.schema_version) {
            changed.push_back(DriftField::schema_version);
        }

        const bool old_has_spec = old_entry.spec.has_value();
        const bool new_has_spec = new_entry->spec.has_value();
        if (old_has_spec != new_has_spec) {
            changed.push_back(DriftField::endpoint_set);
            changed.push_back(DriftField::schema_property_set);
        } else if (old_has_spec && new_has_spec) {
            if (endpoint_fingerprints(*old_entry.spec) !=
                endpoint_fingerprints(*new_entry->spec)) {
                changed.push_back(DriftField::endpoint_set);
            }
            if (property_fingerprints(*old_entry.spec) !=
                property_fingerprints(*new_entry->spec)) {
                changed.push_back(DriftField::schema_property_set);
            }
        }

        if (!changed.empty()) {
            records.push_back(DriftRecord{a.plugin_id, DriftKind::changed,
                                          std::move(changed)});
        }
    }

    for (const CorpusEntry& new_entry : newer.plugins) {
        if (older.find(new_entry.manifest.plugin_id) == nullptr) {
            records.push_back(
                DriftRecord{new_entry.manifest.plugin_id, DriftKind::added, {}});
        }
    }

    std::sort(records.begin(), records.end(),
              [](const DriftRecord& a, const DriftRecord& b) {
                  return a.plugin_id < b.plugin_id;
              });
    return records;
}

std::string utc_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y%m%dT%H%M%SZ", &tm);
    return buffer;
}

}  // namespace plugaudit
