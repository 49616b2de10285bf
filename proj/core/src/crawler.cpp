#include "plugaudit/crawler.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "plugaudit/text.hpp"
#include "plugaudit/url.hpp"

namespace plugaudit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

// Serializes request starts so the global rate never exceeds the configured
// requests/second, regardless of how many workers are in flight.
class RateLimiter {
public:
    explicit RateLimiter(double requests_per_second)
        : interval_(requests_per_second > 0.0
                        ? std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(1.0 / requests_per_second))
                        : Clock::duration::zero()) {}

    void acquire() {
        if (interval_ == Clock::duration::zero()) return;
        Clock::time_point wake;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            const Clock::time_point now = Clock::now();
            next_slot_ = std::max(next_slot_, now);
            wake = next_slot_;
            next_slot_ += interval_;
        }
        std::this_thread::sleep_until(wake);
    }

private:
    const Clock::duration interval_;
    std::mutex mutex_;
    Clock::time_point next_slot_{};
};

struct FetchResult {
    bool ok = false;
    std::string body;
    std::string error;
    std::vector<RedirectNotice> redirects;
};

class Fetcher {
public:
    Fetcher(const CrawlOptions& options) : options_(options), limiter_(options.requests_per_second) {}

    FetchResult fetch(const std::string& url) {
        if (!options_.cache_dir.empty()) {
            if (auto cached = read_cache(url)) {
                FetchResult r;
                r.ok = true;
                r.body = std::move(*cached);
                return r;
            }
        }
        FetchResult result = fetch_uncached(url);
        if (result.ok && !options_.cache_dir.empty()) write_cache(url, result.body);
        return result;
    }

private:
    FetchResult fetch_uncached(const std::string& url) {
        FetchResult result;
        std::string current = url;
        for (int hop = 0; hop <= options_.max_redirect_hops; ++hop) {
            const auto parsed = parse_url(current);
            if (!parsed) {
                result.error = "invalid url: " + current;
                return result;
            }

            httplib::Result response = request_with_retries(*parsed);
            if (!response) {
                result.error = "connection failed: " + httplib::to_string(response.error());
                return result;
            }
            if (response->status >= 300 && response->status < 400) {
                const std::string location = response->get_header_value("Location");
                if (location.empty()) {
                    result.error = "redirect without location";
                    return result;
                }
                std::string next = location;
                if (!is_absolute_url(next)) {
                    next = parsed->origin() + (location[0] == '/' ? location : "/" + location);
                }
                if (const auto next_parsed = parse_url(next);
                    next_parsed && next_parsed->host != parsed->host) {
                    result.redirects.push_back(RedirectNotice{current, next});
                }
                if (hop == options_.max_redirect_hops) {
                    result.error = "too many redirects";
                    return result;
                }
                current = next;
                continue;
            }
            if (response->status != 200) {
                result.error = "http status " + std::to_string(response->status);
                return result;
            }
            result.ok = true;
            result.body = response->body;
            return result;
        }
        result.error = "too many redirects";
        return result;
    }

    httplib::Result request_with_retries(const Url& url) {
        httplib::Result response(nullptr, httplib::Error::Unknown);
        for (int attempt = 0; attempt <= options_.retries; ++attempt) {
            limiter_.acquire();
            httplib::Client client(url.origin());
            client.set_connection_timeout(options_.timeout_seconds, 0);
            client.set_read_timeout(options_.timeout_seconds, 0);
            client.set_follow_location(false);
            client.enable_server_certificate_verification(false);
            response = client.Get(url.path_and_query);
            if (response && response->status < 500) return response;
        }
        return response;
    }

    fs::path cache_path(const std::string& url) const {
        std::ostringstream name;
        name << std::hex << fnv1a64(url) << ".body";
        return options_.cache_dir / name.str();
    }

    std::optional<std::string> read_cache(const std::string& url) const {
        std::ifstream in(cache_path(url), std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    void write_cache(const std::string& url, const std::string& body) const {
        std::error_code ec;
        fs::create_directories(options_.cache_dir, ec);
        std::ofstream out(cache_path(url), std::ios::binary | std::ios::trunc);
        out << body;
    }

    const CrawlOptions& options_;
    RateLimiter limiter_;
};

struct IndexEntry {
    std::string manifest_text;
    std::string source_host;
};

std::vector<IndexEntry> parse_index(const std::string& body) {
    const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_array()) {
        throw IndexUnreachableError("index document is not a JSON array");
    }
    std::vector<IndexEntry> entries;
    for (const auto& item : doc) {
        if (!item.is_object()) continue;
        IndexEntry entry;
        if (item.contains("manifest") && item.at("manifest").is_object()) {
            entry.manifest_text = item.at("manifest").dump();
            for (const char* key : {"domain", "source_host"}) {
                if (item.contains(key) && item.at(key).is_string()) {
                    entry.source_host = item.at(key).get<std::string>();
                    break;
                }
            }
        } else {
            entry.manifest_text = item.dump();
        }
        if (entry.source_host.empty()) {
            // Fall back to the host serving the plugin's API document.
            if (item.contains("api") && item.at("api").is_object() &&
                item.at("api").contains("url") && item.at("api").at("url").is_string()) {
                if (const auto url = parse_url(item.at("api").at("url").get<std::string>())) {
                    entry.source_host = url->host;
                }
            }
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace

Corpus crawl_store(const std::string& index_url, const CrawlOptions& options) {
    Fetcher fetcher(options);

    const FetchResult index = fetcher.fetch(index_url);
    if (!index.ok) {
        throw IndexUnreachableError("cannot fetch index " + index_url + ": " + index.error);
    }
    const std::vector<IndexEntry> entries = parse_index(index.body);

    Corpus corpus;
    corpus.snapshot_id = utc_timestamp_now();
    const std::string retrieved_at = corpus.snapshot_id;

    std::mutex corpus_mutex;
    std::atomic<std::size_t> cursor{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= entries.size()) return;
            const IndexEntry& entry = entries[i];

            auto parsed = parse_manifest(entry.manifest_text, entry.source_host);
            if (!parsed.ok()) {
                std::lock_guard<std::mutex> lock(corpus_mutex);
                corpus.fetch_errors.emplace_back(
                    "(unparsed)",
                    FetchError{index_url, "manifest: " + parsed.error().message()});
                continue;
            }

            CorpusEntry corpus_entry;
            corpus_entry.manifest = std::move(parsed).value();
            corpus_entry.retrieved_at = retrieved_at;
            const std::string id = corpus_entry.manifest.plugin_id;

            std::vector<std::pair<std::string, FetchError>> errors;

            const FetchResult spec = fetcher.fetch(corpus_entry.manifest.api_url);
            for (const RedirectNotice& notice : spec.redirects) {
                corpus_entry.redirect_notices.push_back(notice);
            }
            if (spec.ok) {
                auto parsed_spec = parse_api_spec(spec.body);
                if (parsed_spec.ok()) {
                    corpus_entry.spec = std::move(parsed_spec).value();
                    corpus_entry.spec_raw_text = spec.body;
                } else {
                    errors.emplace_back(id, FetchError{corpus_entry.manifest.api_url,
                                                       parsed_spec.error().message()});
                }
            } else {
                errors.emplace_back(id,
                                    FetchError{corpus_entry.manifest.api_url, spec.error});
            }

            if (options.fetch_policies && corpus_entry.manifest.legal_info_url &&
                is_absolute_url(*corpus_entry.manifest.legal_info_url)) {
                const FetchResult policy =
                    fetcher.fetch(*corpus_entry.manifest.legal_info_url);
                for (const RedirectNotice& notice : policy.redirects) {
                    corpus_entry.redirect_notices.push_back(notice);
                }
                if (policy.ok) {
                    corpus_entry.privacy_policy_text = policy.body;
                } else {
                    errors.emplace_back(
                        id, FetchError{*corpus_entry.manifest.legal_info_url, policy.error});
                }
            }

            std::lock_guard<std::mutex> lock(corpus_mutex);
            for (auto& e : errors) corpus.fetch_errors.push_back(std::move(e));
            if (corpus.find(id) == nullptr) {
                corpus.plugins.push_back(std::move(corpus_entry));
            } else {
                corpus.fetch_errors.emplace_back(
                    id, FetchError{index_url, "duplicate plugin_id in index"});
            }
        }
    };

    const int thread_count =
        std::max(1, std::min<int>(options.parallelism,
                                  static_cast<int>(entries.empty() ? 1 : entries.size())));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();

    corpus.finalize();
    return corpus;
}

}  // namespace plugaudit
