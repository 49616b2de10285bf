#include "plugaudit/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace plugaudit {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

char lower_char(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

// ~50 common English words ignored by token-overlap scoring.
const std::unordered_set<std::string>& stopwords() {
    static const std::unordered_set<std::string> words = {
        "a",    "an",   "and",  "are",  "as",   "at",   "be",   "been", "but",
        "by",   "can",  "did",  "do",   "does", "for",  "from", "had",  "has",
        "have", "i",    "if",   "in",   "into", "is",   "it",   "its",  "me",
        "my",   "no",   "not",  "of",   "on",   "or",   "our",  "so",   "than",
        "that", "the",  "their", "then", "there", "these", "they", "this",
        "those", "to",  "was",  "we",   "were", "will", "with", "you",  "your",
    };
    return words;
}

}  // namespace

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), lower_char);
    return out;
}

bool is_stopword(std::string_view lowercase_token) {
    return stopwords().count(std::string(lowercase_token)) > 0;
}

std::vector<Token> scan_tokens(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < text.size() && is_word_char(text[i])) ++i;
        tokens.push_back(Token{std::string(text.substr(begin, i - begin)), begin, i});
    }
    return tokens;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    for (const Token& t : scan_tokens(text)) out.push_back(to_lower(t.text));
    return out;
}

std::vector<std::string> content_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (std::string& t : tokenize(text)) {
        if (!is_stopword(t)) out.push_back(std::move(t));
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::vector<std::uint64_t> shingle_hashes(std::string_view text, int n) {
    const std::vector<std::string> tokens = tokenize(text);
    std::vector<std::uint64_t> hashes;
    if (tokens.empty()) return hashes;

    auto hash_range = [&](std::size_t begin, std::size_t count) {
        std::string joined;
        for (std::size_t k = 0; k < count; ++k) {
            if (k > 0) joined.push_back(' ');
            joined += tokens[begin + k];
        }
        return fnv1a64(joined);
    };

    const std::size_t width = static_cast<std::size_t>(n);
    if (tokens.size() < width) {
        hashes.push_back(hash_range(0, tokens.size()));
    } else {
        for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
            hashes.push_back(hash_range(i, width));
        }
    }
    std::sort(hashes.begin(), hashes.end());
    hashes.erase(std::unique(hashes.begin(), hashes.end()), hashes.end());
    return hashes;
}

double jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::uint64_t> ha, hb;
    ha.reserve(a.size());
    hb.reserve(b.size());
    for (const auto& t : a) ha.push_back(fnv1a64(t));
    for (const auto& t : b) hb.push_back(fnv1a64(t));
    std::sort(ha.begin(), ha.end());
    ha.erase(std::unique(ha.begin(), ha.end()), ha.end());
    std::sort(hb.begin(), hb.end());
    hb.erase(std::unique(hb.begin(), hb.end()), hb.end());
    return jaccard(ha, hb);
}

namespace {

std::vector<std::string> term_words(std::string_view term) {
    std::vector<std::string> words;
    std::string current;
    for (char c : term) {
        if (is_word_char(c)) {
            current.push_back(lower_char(c));
        } else if (!current.empty()) {
            words.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(current);
    return words;
}

}  // namespace

std::optional<TermMatch> find_term(std::string_view text, std::string_view term,
                                   std::size_t from) {
    const std::vector<std::string> words = term_words(term);
    if (words.empty()) return std::nullopt;

    const std::vector<Token> tokens = scan_tokens(text);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].begin < from) continue;
        if (i + words.size() > tokens.size()) break;
        bool all = true;
        for (std::size_t k = 0; k < words.size(); ++k) {
            if (to_lower(tokens[i + k].text) != words[k]) {
                all = false;
                break;
            }
        }
        if (all) {
            return TermMatch{tokens[i].begin, tokens[i + words.size() - 1].end};
        }
    }
    return std::nullopt;
}

std::vector<TermMatch> find_term_all(std::string_view text, std::string_view term) {
    std::vector<TermMatch> matches;
    std::size_t from = 0;
    while (auto m = find_term(text, term, from)) {
        matches.push_back(*m);
        from = m->begin + 1;
    }
    return matches;
}

std::vector<SentenceSpan> split_sentences(std::string_view text) {
    std::vector<SentenceSpan> spans;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        // Punctuation ends a sentence only before whitespace or end of text,
        // so dotted hosts and addresses stay intact.
        const bool at_boundary =
            i + 1 == text.size() ||
            std::isspace(static_cast<unsigned char>(text[i + 1])) != 0;
        if (c == '\n' || ((c == '.' || c == '!' || c == '?') && at_boundary)) {
            if (i > begin) spans.push_back(SentenceSpan{begin, i + 1});
            begin = i + 1;
        }
    }
    if (begin < text.size()) spans.push_back(SentenceSpan{begin, text.size()});
    return spans;
}

SentenceSpan sentence_around(std::string_view text, std::size_t pos) {
    for (const SentenceSpan& s : split_sentences(text)) {
        if (pos >= s.begin && pos < s.end) return s;
    }
    return SentenceSpan{0, text.size()};
}

}  // namespace plugaudit
