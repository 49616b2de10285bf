#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "plugaudit/corpus.hpp"

namespace plugaudit {

struct CrawlOptions {
    double requests_per_second = 2.0;
    int timeout_seconds = 15;
    int retries = 2;
    int parallelism = 8;      // fetches in flight
    int max_redirect_hops = 3;
    std::filesystem::path cache_dir;  // empty: no on-disk cache
    bool fetch_policies = true;
};

/// Only the index itself failing aborts a crawl.
class IndexUnreachableError : public std::runtime_error {
public:
    explicit IndexUnreachableError(const std::string& what) : std::runtime_error(what) {}
};

/// Fetches the amalgamated manifest index, then each plugin's API spec and
/// privacy policy. Per-plugin failures are recorded in the corpus, never
/// thrown. Responses are cached on disk per URL when cache_dir is set.
///
/// The index document is a JSON array whose elements are either manifest
/// objects (source host derived from api.url) or wrappers of the form
/// {"domain": ..., "manifest": {...}}.
Corpus crawl_store(const std::string& index_url, const CrawlOptions& options = {});

}  // namespace plugaudit
