#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plugaudit {

/// One token of a text, with its original casing and character range.
struct Token {
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;  // one past the last character
};

/// Half-open character range of a match inside a source string.
struct TermMatch {
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct SentenceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::string to_lower(std::string_view text);

bool is_stopword(std::string_view lowercase_token);

/// Splits on non-alphanumeric runs, preserving original casing and positions.
std::vector<Token> scan_tokens(std::string_view text);

/// Lowercased tokens, split on non-alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

/// tokenize() minus stopwords.
std::vector<std::string> content_tokens(std::string_view text);

/// Sorted unique FNV-1a hashes of lowercase word n-shingles. Texts with fewer
/// than n tokens contribute a single shingle over all their tokens; empty
/// texts yield an empty set.
std::vector<std::uint64_t> shingle_hashes(std::string_view text, int n = 3);

/// Jaccard index over two sorted unique hash sets. Both empty -> 1.0.
double jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

/// Jaccard index over token sets. Both empty -> 1.0.
double jaccard_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Finds `term` in `text` case-insensitively, starting at `from`. The term's
/// words must appear in order, each pair separated by a single run of
/// non-alphanumeric characters, and the whole match must sit on token
/// boundaries ("pay" never matches inside "payload"). Word separators inside
/// the term itself may be spaces, hyphens or underscores.
std::optional<TermMatch> find_term(std::string_view text, std::string_view term,
                                   std::size_t from = 0);

std::vector<TermMatch> find_term_all(std::string_view text, std::string_view term);

/// Sentence ranges split on '.', '!', '?' and newlines.
std::vector<SentenceSpan> split_sentences(std::string_view text);

/// The sentence containing character position `pos` (or the whole text when
/// no terminator surrounds it).
SentenceSpan sentence_around(std::string_view text, std::size_t pos);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace plugaudit
