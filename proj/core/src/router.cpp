#include "plugaudit/router.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "plugaudit/text.hpp"

namespace plugaudit {

namespace {

const std::map<std::string, std::string>& language_tags() {
    static const std::map<std::string, std::string> tags = {
        {"english", "en"}, {"spanish", "es"}, {"french", "fr"},  {"german", "de"},
        {"italian", "it"}, {"portuguese", "pt"}, {"chinese", "zh"}, {"japanese", "ja"},
        {"korean", "ko"},  {"russian", "ru"}, {"arabic", "ar"},  {"hindi", "hi"},
        {"dutch", "nl"},   {"turkish", "tr"},
    };
    return tags;
}

std::string language_tag_for(const std::string& word) {
    const std::string lowered = to_lower(word);
    const auto it = language_tags().find(lowered);
    return it == language_tags().end() ? lowered : it->second;
}

std::string sentence_text(std::string_view text, const SentenceSpan& span) {
    std::string out(text.substr(span.begin, span.end - span.begin));
    while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
    return out;
}

// First token strictly after `pos`, skipping an optional leading "in".
std::optional<std::string> token_after(const std::vector<Token>& tokens, std::size_t pos,
                                       bool skip_in) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].begin < pos) continue;
        if (skip_in && to_lower(tokens[i].text) == "in") {
            skip_in = false;
            continue;
        }
        return tokens[i].text;
    }
    return std::nullopt;
}

std::string trim_fact_value(std::string value) {
    while (!value.empty() &&
           (std::isspace(static_cast<unsigned char>(value.front())) != 0)) {
        value.erase(value.begin());
    }
    while (!value.empty()) {
        const char c = value.back();
        if (std::isspace(static_cast<unsigned char>(c)) != 0 || c == '.' || c == ',' ||
            c == '!' || c == '?' || c == ';') {
            value.pop_back();
        } else {
            break;
        }
    }
    return value;
}

bool tokens_share_word(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const std::string& x : a) {
        if (std::find(b.begin(), b.end(), x) != b.end()) return true;
    }
    return false;
}

// Leaf request properties and endpoint parameters of one endpoint.
std::vector<std::pair<std::string, const SchemaProperty*>> endpoint_leaf_properties(
    const ApiSpecification& spec, const Endpoint& endpoint) {
    std::vector<std::pair<std::string, const SchemaProperty*>> out;
    for (const FlatProperty& f : flatten_properties(spec)) {
        if (f.endpoint_path != endpoint.path) continue;
        if (!f.property->children.empty()) continue;
        out.emplace_back(f.property_path, f.property);
    }
    return out;
}

std::optional<std::string> raw_word_with_at(std::string_view prompt) {
    std::string current;
    std::vector<std::string> words;
    for (char c : prompt) {
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            if (!current.empty()) words.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) words.push_back(current);
    for (std::string& word : words) {
        word = trim_fact_value(word);
        if (word.find('@') != std::string::npos && word.find('.') != std::string::npos) {
            return word;
        }
    }
    return std::nullopt;
}

}  // namespace

std::string directive_kind_name(DirectiveKind kind) {
    switch (kind) {
        case DirectiveKind::reply_language: return "reply_language";
        case DirectiveKind::route_all_topic: return "route_all_topic";
        case DirectiveKind::style: return "style";
    }
    return "style";
}

std::optional<DirectiveKind> directive_kind_from_name(std::string_view name) {
    if (name == "reply_language") return DirectiveKind::reply_language;
    if (name == "route_all_topic") return DirectiveKind::route_all_topic;
    if (name == "style") return DirectiveKind::style;
    return std::nullopt;
}

std::string isolation_policy_name(IsolationPolicy policy) {
    return policy == IsolationPolicy::none ? "none" : "context_isolation";
}

std::optional<IsolationPolicy> isolation_policy_from_name(std::string_view name) {
    if (name == "none") return IsolationPolicy::none;
    if (name == "context_isolation") return IsolationPolicy::context_isolation;
    return std::nullopt;
}

std::string provenance_name(ValueProvenance provenance) {
    return provenance == ValueProvenance::this_prompt ? "this_prompt" : "conversation_fact";
}

std::vector<Directive> extract_directives(const PluginManifest& manifest,
                                          const DetectorConfig& config) {
    std::vector<Directive> directives;
    const std::string& desc = manifest.description_for_model;
    if (desc.empty()) return directives;

    const std::vector<Token> tokens = scan_tokens(desc);

    // Behavior imperatives: reply/respond language, suppression styles.
    for (const std::string& term : config.session_directive_lexicon) {
        for (const TermMatch& match : find_term_all(desc, term)) {
            const SentenceSpan sentence = sentence_around(desc, match.begin);
            Directive d;
            d.source_text = sentence_text(desc, sentence);
            if (term == "reply in" || term == "respond in" || term == "respond only") {
                const auto language = token_after(tokens, match.end, /*skip_in=*/true);
                if (!language) continue;
                d.kind = DirectiveKind::reply_language;
                d.value = language_tag_for(*language);
            } else {
                d.kind = DirectiveKind::style;
                d.value = term;
            }
            if (std::find(directives.begin(), directives.end(), d) == directives.end()) {
                directives.push_back(std::move(d));
            }
        }
    }

    // Routing claims: a directive phrase plus a recognizable topic in the
    // same sentence.
    for (const std::string& term : config.directive_lexicon) {
        for (const TermMatch& match : find_term_all(desc, term)) {
            const SentenceSpan sentence = sentence_around(desc, match.begin);
            std::optional<std::string> topic;
            std::vector<Token> sentence_tokens;
            for (const Token& t : tokens) {
                if (t.begin >= sentence.begin && t.end <= sentence.end) {
                    sentence_tokens.push_back(t);
                }
            }
            for (std::size_t i = 0; i + 1 < sentence_tokens.size() && !topic; ++i) {
                const std::string next = to_lower(sentence_tokens[i + 1].text);
                if (next == "related") topic = to_lower(sentence_tokens[i].text);
            }
            for (std::size_t i = 0; i + 2 < sentence_tokens.size() && !topic; ++i) {
                const std::string first = to_lower(sentence_tokens[i].text);
                const std::string third = to_lower(sentence_tokens[i + 2].text);
                if ((first == "any" || first == "all" || first == "every") &&
                    (third == "queries" || third == "query" || third == "questions" ||
                     third == "question" || third == "prompts" || third == "prompt" ||
                     third == "requests" || third == "request")) {
                    topic = to_lower(sentence_tokens[i + 1].text);
                }
            }
            if (!topic) continue;
            Directive d;
            d.kind = DirectiveKind::route_all_topic;
            d.value = *topic;
            d.source_text = sentence_text(desc, sentence);
            if (std::find(directives.begin(), directives.end(), d) == directives.end()) {
                directives.push_back(std::move(d));
            }
        }
    }
    return directives;
}

std::vector<ConversationFact> extract_facts(std::string_view prompt, int turn_index) {
    std::vector<ConversationFact> facts;

    // "my <key, one to three words> is <rest of sentence>"
    const std::vector<Token> tokens = scan_tokens(prompt);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (to_lower(tokens[i].text) != "my") continue;
        const SentenceSpan sentence = sentence_around(prompt, tokens[i].begin);
        for (std::size_t j = i + 1; j <= i + 3 && j < tokens.size(); ++j) {
            if (tokens[j].end > sentence.end) break;
            if (to_lower(tokens[j].text) != "is") continue;
            if (j == i + 1) break;  // "my is ..." carries no key
            std::string key;
            for (std::size_t k = i + 1; k < j; ++k) {
                if (!key.empty()) key.push_back(' ');
                key += to_lower(tokens[k].text);
            }
            const std::size_t value_begin = tokens[j].end;
            if (value_begin >= sentence.end) break;
            std::string value = trim_fact_value(
                std::string(prompt.substr(value_begin, sentence.end - value_begin)));
            if (!value.empty()) {
                facts.push_back(ConversationFact{key, value, turn_index});
            }
            break;
        }
    }

    // "<key>: <value>", evaluated per sentence; the key is the short token
    // run between the last comma (or sentence start) and the colon.
    for (const SentenceSpan& sentence : split_sentences(prompt)) {
        const std::string_view text =
            prompt.substr(sentence.begin, sentence.end - sentence.begin);
        const std::size_t colon = text.find(':');
        if (colon == std::string_view::npos || colon == 0 || colon + 1 >= text.size()) {
            continue;
        }
        std::string_view key_part = text.substr(0, colon);
        if (const std::size_t comma = key_part.rfind(','); comma != std::string_view::npos) {
            key_part = key_part.substr(comma + 1);
        }
        const std::vector<std::string> key_tokens = tokenize(key_part);
        if (key_tokens.empty() || key_tokens.size() > 3) continue;
        std::string key;
        for (const std::string& t : key_tokens) {
            if (!key.empty()) key.push_back(' ');
            key += t;
        }
        const std::string value = trim_fact_value(std::string(text.substr(colon + 1)));
        if (!value.empty()) {
            facts.push_back(ConversationFact{key, value, turn_index});
        }
    }
    return facts;
}

SessionState SessionState::create(std::vector<EnabledPlugin> plugins, IsolationPolicy policy,
                                  const DetectorConfig& config) {
    SessionState state;
    state.enabled_plugins = std::move(plugins);
    state.isolation_policy = policy;
    state.config = config;
    for (const EnabledPlugin& plugin : state.enabled_plugins) {
        for (Directive& d : extract_directives(plugin.manifest, config)) {
            state.active_directives.emplace_back(plugin.manifest.plugin_id, std::move(d));
        }
    }
    return state;
}

RouterDecision route(std::string_view prompt, const SessionState& state) {
    RouterDecision decision;
    const std::vector<std::string> prompt_tokens = content_tokens(prompt);
    const std::set<std::string> prompt_set(prompt_tokens.begin(), prompt_tokens.end());

    std::vector<std::string> brand_tokens;
    for (const std::string& domain : state.config.brand_lexicon) {
        const std::size_t dot = domain.find('.');
        brand_tokens.push_back(dot == std::string::npos ? domain : domain.substr(0, dot));
    }

    const EnabledPlugin* best = nullptr;
    double best_score = 0.0;
    for (const EnabledPlugin& plugin : state.enabled_plugins) {
        const std::string& id = plugin.manifest.plugin_id;
        ScoreBreakdown score;

        std::set<std::string> surface(
            [&] {
                std::vector<std::string> t =
                    content_tokens(plugin.manifest.description_for_model);
                if (plugin.spec) {
                    for (const Endpoint& ep : plugin.spec->endpoints) {
                        if (!ep.summary) continue;
                        for (std::string& s : content_tokens(*ep.summary)) {
                            t.push_back(std::move(s));
                        }
                    }
                }
                return std::set<std::string>(t.begin(), t.end());
            }());

        if (!prompt_tokens.empty()) {
            std::size_t hits = 0;
            for (const std::string& token : prompt_set) {
                if (surface.count(token) > 0) ++hits;
            }
            score.keyword_overlap =
                static_cast<double>(hits) / static_cast<double>(prompt_set.size());
        }

        for (const auto& [directive_plugin, directive] : state.active_directives) {
            if (directive_plugin != id) continue;
            if (directive.kind == DirectiveKind::route_all_topic &&
                prompt_set.count(directive.value) > 0) {
                score.directive_boost = kDirectiveBoost;
            }
        }

        for (const std::string& brand : brand_tokens) {
            if (!brand.empty() && prompt_set.count(brand) > 0 && surface.count(brand) > 0) {
                score.brand_match = kBrandBoost;
                break;
            }
        }

        decision.scores[id] = score;
        const double total = score.total();
        if (total > 0.0 &&
            (best == nullptr || total > best_score ||
             (total == best_score && id < best->manifest.plugin_id))) {
            best = &plugin;
            best_score = total;
        }
    }

    if (best == nullptr) return decision;
    decision.chosen_plugin = best->manifest.plugin_id;

    if (best->spec && !best->spec->endpoints.empty()) {
        const Endpoint* chosen = nullptr;
        std::size_t chosen_hits = 0;
        for (const Endpoint& ep : best->spec->endpoints) {
            std::vector<std::string> summary_tokens;
            if (ep.summary) summary_tokens = content_tokens(*ep.summary);
            if (ep.operation_id) {
                for (std::string& t : content_tokens(*ep.operation_id)) {
                    summary_tokens.push_back(std::move(t));
                }
            }
            for (std::string& t : content_tokens(ep.path)) {
                summary_tokens.push_back(std::move(t));
            }
            const std::set<std::string> summary_set(summary_tokens.begin(),
                                                    summary_tokens.end());
            std::size_t hits = 0;
            for (const std::string& token : prompt_set) {
                if (summary_set.count(token) > 0) ++hits;
            }
            if (chosen == nullptr || hits > chosen_hits) {
                chosen = &ep;
                chosen_hits = hits;
            }
        }
        decision.chosen_endpoint = chosen->path;

        // Parameter filling: prompt first, then accumulated facts.
        const std::vector<Token> prompt_words = scan_tokens(prompt);
        for (const auto& [path, property] :
             endpoint_leaf_properties(*best->spec, *chosen)) {
            const std::vector<std::string> name_tokens = tokenize(property->name);
            const std::string role_text =
                property->name + " " + property->description.value_or("");

            std::optional<FilledParameter> filled;

            const bool origin_role = find_term(role_text, "origin").has_value() ||
                                     find_term(property->name, "from").has_value();
            const bool destination_role =
                find_term(role_text, "destination").has_value() ||
                find_term(property->name, "to").has_value();
            if (origin_role) {
                for (std::size_t i = 0; i + 1 < prompt_words.size(); ++i) {
                    if (to_lower(prompt_words[i].text) == "from") {
                        filled = FilledParameter{prompt_words[i + 1].text,
                                                 ValueProvenance::this_prompt};
                        break;
                    }
                }
            } else if (destination_role) {
                for (std::size_t i = 0; i + 1 < prompt_words.size(); ++i) {
                    if (to_lower(prompt_words[i].text) == "to") {
                        filled = FilledParameter{prompt_words[i + 1].text,
                                                 ValueProvenance::this_prompt};
                        break;
                    }
                }
            }
            if (!filled &&
                std::find(name_tokens.begin(), name_tokens.end(), "email") !=
                    name_tokens.end()) {
                if (const auto email = raw_word_with_at(prompt)) {
                    filled = FilledParameter{*email, ValueProvenance::this_prompt};
                }
            }

            if (!filled) {
                // Most recent matching fact wins.
                for (auto it = state.conversation_facts.rbegin();
                     it != state.conversation_facts.rend(); ++it) {
                    if (tokens_share_word(tokenize(it->key), name_tokens)) {
                        filled = FilledParameter{it->value,
                                                 ValueProvenance::conversation_fact};
                        break;
                    }
                }
            }

            if (filled) decision.filled_parameters[path] = std::move(*filled);
        }
    }
    return decision;
}

RenderedTurn render_turn(const RouterDecision& decision, std::string_view plugin_response,
                         const SessionState& state) {
    RenderedTurn turn;
    turn.response_text = std::string(plugin_response);

    for (const auto& [plugin_id, directive] : state.active_directives) {
        const bool applies =
            state.isolation_policy == IsolationPolicy::none
                ? true
                : (decision.chosen_plugin && *decision.chosen_plugin == plugin_id);
        if (!applies) continue;
        turn.applied_directives.push_back(AppliedDirective{plugin_id, directive});
        if (directive.kind == DirectiveKind::reply_language && !turn.language_tag) {
            turn.language_tag = directive.value;
        }
    }
    return turn;
}

}  // namespace plugaudit
