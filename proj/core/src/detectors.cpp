#include "plugaudit/detectors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <set>
#include <tuple>

#include "plugaudit/text.hpp"
#include "plugaudit/url.hpp"

namespace plugaudit {

namespace {

TaxonomyCoordinate must_coordinate(Stakeholders s, const char* goal, const char* method) {
    auto c = TaxonomyCoordinate::make(s, goal, method);
    // Detector coordinates are registry rows by construction.
    return *c;
}

const TaxonomyCoordinate& coord_plugin_squatting() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_user, "hijack-user-account", "squat-another-plugin");
    return c;
}
const TaxonomyCoordinate& coord_topic_squatting() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_plugin, "hijack-prompts-on-topic", "squat-a-topic");
    return c;
}
const TaxonomyCoordinate& coord_description_injection() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_platform, "hijack-llm-platform", "inject-malicious-description");
    return c;
}
const TaxonomyCoordinate& coord_credential_exposure() {
    static const TaxonomyCoordinate c =
        must_coordinate(Stakeholders::plugin_user, "hijack-user-machine",
                        "exploit-info-shared-for-legitimate-reason");
    return c;
}
const TaxonomyCoordinate& coord_missing_action_auth() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_user, "hijack-user-account", "abuse-authorization");
    return c;
}
const TaxonomyCoordinate& coord_functionality_squatting() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_plugin, "hijack-another-plugins-prompts", "squat-functionality");
    return c;
}
const TaxonomyCoordinate& coord_broad_api() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_user, "harvest-user-data", "define-broad-api-specifications");
    return c;
}
const TaxonomyCoordinate& coord_deceptive_design() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_user, "manipulate-users", "deploy-deceptive-design-patterns");
    return c;
}
const TaxonomyCoordinate& coord_response_injection() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_platform, "hijack-llm-platform", "inject-malicious-response");
    return c;
}
const TaxonomyCoordinate& coord_functionality_lying() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_user, "manipulate-users", "lie-or-change-functionality");
    return c;
}
const TaxonomyCoordinate& coord_offsite_data_flow() {
    static const TaxonomyCoordinate c = must_coordinate(
        Stakeholders::plugin_user, "benefit-partner-plugins", "share-user-data");
    return c;
}

std::string format_fraction(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3f", value);
    return buffer;
}

Finding make_finding(std::string detector_id, TaxonomyCoordinate coordinate,
                     Severity severity) {
    return Finding{std::move(detector_id), std::move(coordinate), severity, {}, {}, ""};
}

EvidenceSpan span_from_match(EvidenceLocation location, std::string detail,
                             std::string_view source, const TermMatch& match,
                             std::string plugin_id) {
    return EvidenceSpan{
        location,
        std::move(detail),
        std::string(source.substr(match.begin, match.end - match.begin)),
        match.begin,
        match.end,
        std::move(plugin_id),
    };
}

EvidenceSpan full_span(EvidenceLocation location, std::string detail,
                       std::string_view source, std::string plugin_id) {
    return EvidenceSpan{location,    std::move(detail),    std::string(source),
                        0,           source.size(),        std::move(plugin_id)};
}

// One addressable property: schema-rooted ("schema.path") or an endpoint
// parameter ("/path#param").
struct PropertyRef {
    std::string detail;
    const SchemaProperty* property = nullptr;
};

void collect_parameter_refs(const SchemaProperty& prop, const std::string& prefix,
                            const std::string& endpoint_path,
                            std::vector<PropertyRef>& out) {
    const std::string path = prefix.empty() ? prop.name : prefix + "." + prop.name;
    out.push_back(PropertyRef{endpoint_path + "#" + path, &prop});
    for (const SchemaProperty& child : prop.children) {
        collect_parameter_refs(child, path, endpoint_path, out);
    }
}

std::vector<PropertyRef> all_property_refs(const ApiSpecification& spec) {
    std::vector<PropertyRef> out;
    for (const FlatSchemaProperty& f : flatten_schema_properties(spec)) {
        out.push_back(PropertyRef{f.schema_name + "." + f.property_path, f.property});
    }
    for (const Endpoint& ep : spec.endpoints) {
        for (const SchemaProperty& param : ep.parameters) {
            collect_parameter_refs(param, "", ep.path, out);
        }
    }
    return out;
}

// Lexicon sweep over one source string; spans for every match of every term.
std::vector<EvidenceSpan> lexicon_spans(const std::vector<std::string>& lexicon,
                                        std::string_view source,
                                        EvidenceLocation location, std::string detail,
                                        const std::string& plugin_id) {
    std::vector<EvidenceSpan> spans;
    for (const std::string& term : lexicon) {
        for (const TermMatch& match : find_term_all(source, term)) {
            spans.push_back(span_from_match(location, detail, source, match, plugin_id));
        }
    }
    std::sort(spans.begin(), spans.end(), [](const EvidenceSpan& a, const EvidenceSpan& b) {
        return std::tie(a.begin, a.end, a.excerpt) < std::tie(b.begin, b.end, b.excerpt);
    });
    return spans;
}

bool sentence_has_self_reference(std::string_view sentence, const PluginManifest& manifest) {
    if (find_term(sentence, "plugin")) return true;
    if (!manifest.name_for_model.empty() && find_term(sentence, manifest.name_for_model)) {
        return true;
    }
    if (!manifest.name_for_human.empty() && find_term(sentence, manifest.name_for_human)) {
        return true;
    }
    return false;
}

std::set<std::string> lexicon_words(const std::vector<std::string>& lexicon) {
    std::set<std::string> words;
    for (const std::string& phrase : lexicon) {
        for (const std::string& word : tokenize(phrase)) words.insert(word);
    }
    return words;
}

bool is_all_caps(const std::string& token) {
    bool has_alpha = false;
    for (char c : token) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            has_alpha = true;
            if (std::islower(static_cast<unsigned char>(c))) return false;
        }
    }
    return has_alpha;
}

// Verbs whose presence marks an endpoint as read-only despite its method;
// search-style POST endpoints fetch data rather than take an action.
constexpr std::array<std::string_view, 13> kReadOnlyVerbs = {
    "search", "query",  "list", "find", "lookup", "get",  "fetch",
    "browse", "recommend", "suggest", "read", "view", "check",
};

bool endpoint_is_read_only(const Endpoint& ep) {
    for (std::string_view verb : kReadOnlyVerbs) {
        if (find_term(ep.path, verb)) return true;
        if (ep.operation_id && find_term(*ep.operation_id, verb)) return true;
        if (ep.summary && find_term(*ep.summary, verb)) return true;
    }
    return false;
}

bool endpoint_is_state_changing(const Endpoint& ep) {
    switch (ep.http_method) {
        case HttpMethod::post:
        case HttpMethod::put:
        case HttpMethod::patch:
        case HttpMethod::del:
            return !endpoint_is_read_only(ep);
        default:
            return false;
    }
}

std::string brand_token(const std::string& brand_domain) {
    const std::size_t dot = brand_domain.find('.');
    return dot == std::string::npos ? brand_domain : brand_domain.substr(0, dot);
}

constexpr std::array<std::string_view, 9> kCommerceTerms = {
    "search", "products", "product", "shop", "shopping",
    "store",  "marketplace", "buy",  "deals",
};

}  // namespace

std::string property_source_text(const SchemaProperty& property) {
    std::string text = property.name;
    if (property.description && !property.description->empty()) {
        text += " " + *property.description;
    }
    return text;
}

std::string endpoint_source_text(const Endpoint& endpoint) {
    std::string text = endpoint.path;
    if (endpoint.summary && !endpoint.summary->empty()) text += " " + *endpoint.summary;
    if (endpoint.description && !endpoint.description->empty()) {
        text += " " + *endpoint.description;
    }
    return text;
}

std::vector<Finding> d1_plugin_squatting(const Corpus& corpus, const DetectorConfig& config) {
    std::vector<Finding> findings;
    const std::size_t n = corpus.plugins.size();
    if (n < 2) return findings;

    struct Signature {
        std::string name_lower;
        std::vector<std::uint64_t> shingles;
    };
    std::vector<Signature> signatures(n);
    for (std::size_t i = 0; i < n; ++i) {
        const CorpusEntry& entry = corpus.plugins[i];
        signatures[i].name_lower = to_lower(entry.manifest.name_for_model);
        std::string body = entry.manifest.description_for_model;
        if (entry.spec) {
            body += " ";
            body += spec_surface_text(*entry.spec);
        }
        signatures[i].shingles = shingle_hashes(body);
    }

    const double threshold = config.duplicate_similarity_threshold;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const CorpusEntry& a = corpus.plugins[i];
            const CorpusEntry& b = corpus.plugins[j];
            if (a.manifest.source_host == b.manifest.source_host) continue;

            const bool name_match = signatures[i].name_lower == signatures[j].name_lower;
            bool body_match = false;
            double similarity = 0.0;
            const std::size_t sa = signatures[i].shingles.size();
            const std::size_t sb = signatures[j].shingles.size();
            const std::size_t lo = std::min(sa, sb), hi = std::max(sa, sb);
            // |A∩B|/|A∪B| >= t needs |A| and |B| within a factor of 1/t.
            if (hi > 0 && static_cast<double>(lo) >= threshold * static_cast<double>(hi)) {
                similarity = jaccard(signatures[i].shingles, signatures[j].shingles);
                body_match = similarity >= threshold;
            } else if (name_match && hi > 0) {
                similarity = jaccard(signatures[i].shingles, signatures[j].shingles);
                body_match = similarity >= threshold;
            }
            if (!name_match && !body_match) continue;

            // Normalize pair order by plugin_id so output is invariant under
            // corpus permutation.
            const CorpusEntry* first = &a;
            const CorpusEntry* second = &b;
            if (second->manifest.plugin_id < first->manifest.plugin_id) {
                std::swap(first, second);
            }

            Finding f = make_finding("D1", coord_plugin_squatting(),
                                     (name_match && body_match) ? Severity::high
                                                                : Severity::medium);
            f.plugin_ids = {first->manifest.plugin_id, second->manifest.plugin_id};
            f.evidence.push_back(full_span(EvidenceLocation::manifest_field, "source_host",
                                           first->manifest.source_host,
                                           first->manifest.plugin_id));
            f.evidence.push_back(full_span(EvidenceLocation::manifest_field, "source_host",
                                           second->manifest.source_host,
                                           second->manifest.plugin_id));
            f.message = "possible plugin squatting: " +
                        std::string(name_match ? "identical model-facing name" : "near-identical body") +
                        (body_match ? " (body similarity " + format_fraction(similarity) + ")"
                                    : "") +
                        " published from " + first->manifest.source_host + " and " +
                        second->manifest.source_host;
            findings.push_back(std::move(f));
        }
    }
    return findings;
}

std::vector<Finding> d2_topic_squatting(const Corpus& corpus, const DetectorConfig& config) {
    std::vector<Finding> findings;
    const std::set<std::string> directive_words = lexicon_words(config.directive_lexicon);

    for (const CorpusEntry& entry : corpus.plugins) {
        const std::string& desc = entry.manifest.description_for_model;
        if (desc.empty()) continue;
        const std::string& id = entry.manifest.plugin_id;

        std::vector<EvidenceSpan> spans;
        for (const std::string& term : config.directive_lexicon) {
            for (const TermMatch& match : find_term_all(desc, term)) {
                const SentenceSpan sentence = sentence_around(desc, match.begin);
                const std::string_view sentence_text =
                    std::string_view(desc).substr(sentence.begin, sentence.end - sentence.begin);
                if (sentence_has_self_reference(sentence_text, entry.manifest)) {
                    spans.push_back(span_from_match(EvidenceLocation::description_for_model,
                                                    "", desc, match, id));
                }
            }
        }

        // Shouting directives: deliberately case-sensitive.
        std::vector<EvidenceSpan> caps_spans;
        for (const Token& token : scan_tokens(desc)) {
            if (token.text.size() >= 4 && is_all_caps(token.text) &&
                directive_words.count(to_lower(token.text)) > 0) {
                caps_spans.push_back(span_from_match(EvidenceLocation::description_for_model,
                                                     "", desc,
                                                     TermMatch{token.begin, token.end}, id));
            }
        }
        if (caps_spans.size() >= 2) {
            for (EvidenceSpan& s : caps_spans) spans.push_back(std::move(s));
        }

        if (spans.empty()) continue;
        std::sort(spans.begin(), spans.end(),
                  [](const EvidenceSpan& a, const EvidenceSpan& b) {
                      return std::tie(a.begin, a.end) < std::tie(b.begin, b.end);
                  });
        spans.erase(std::unique(spans.begin(), spans.end()), spans.end());

        Finding f = make_finding("D2", coord_topic_squatting(), Severity::high);
        f.plugin_ids = {id};
        f.evidence = std::move(spans);
        f.message = "model-facing description carries a routing directive claiming a topic";
        findings.push_back(std::move(f));
    }
    return findings;
}

std::vector<Finding> d3_session_hijack_directive(const Corpus& corpus,
                                                 const DetectorConfig& config) {
    std::vector<Finding> findings;
    for (const CorpusEntry& entry : corpus.plugins) {
        const std::string& desc = entry.manifest.description_for_model;
        if (desc.empty()) continue;
        std::vector<EvidenceSpan> spans =
            lexicon_spans(config.session_directive_lexicon, desc,
                          EvidenceLocation::description_for_model, "",
                          entry.manifest.plugin_id);
        if (spans.empty()) continue;

        Finding f = make_finding("D3", coord_description_injection(), Severity::high);
        f.plugin_ids = {entry.manifest.plugin_id};
        f.evidence = std::move(spans);
        f.message = "model-facing description instructs the model to alter session behavior";
        findings.push_back(std::move(f));
    }
    return findings;
}

std::vector<Finding> d4_credential_exfiltration(const Corpus& corpus,
                                                const DetectorConfig& config) {
    std::vector<Finding> findings;
    for (const CorpusEntry& entry : corpus.plugins) {
        const std::string& id = entry.manifest.plugin_id;

        if (!entry.manifest.description_for_model.empty()) {
            std::vector<EvidenceSpan> spans = lexicon_spans(
                config.sensitive_param_lexicon, entry.manifest.description_for_model,
                EvidenceLocation::description_for_model, "", id);
            if (!spans.empty()) {
                Finding f = make_finding("D4", coord_credential_exposure(), Severity::high);
                f.plugin_ids = {id};
                f.evidence = std::move(spans);
                f.message = "model-facing description solicits credential material";
                findings.push_back(std::move(f));
            }
        }

        if (!entry.spec) continue;

        for (const PropertyRef& ref : all_property_refs(*entry.spec)) {
            const std::string source = property_source_text(*ref.property);
            std::vector<EvidenceSpan> spans =
                lexicon_spans(config.sensitive_param_lexicon, source,
                              EvidenceLocation::spec_property, ref.detail, id);
            if (spans.empty()) continue;
            Finding f = make_finding("D4", coord_credential_exposure(), Severity::high);
            f.plugin_ids = {id};
            f.evidence = std::move(spans);
            f.message = "parameter '" + ref.detail + "' carries credential material";
            findings.push_back(std::move(f));
        }

        if (entry.manifest.auth.type_string() == "none") {
            for (const Endpoint& ep : entry.spec->endpoints) {
                if (!endpoint_is_state_changing(ep)) continue;
                Finding f = make_finding("D4", coord_missing_action_auth(), Severity::medium);
                f.plugin_ids = {id};
                f.evidence.push_back(full_span(EvidenceLocation::manifest_field, "auth.type",
                                               entry.manifest.auth.type_string(), id));
                const std::string ep_source = endpoint_source_text(ep);
                f.evidence.push_back(span_from_match(EvidenceLocation::spec_endpoint, ep.path,
                                                     ep_source,
                                                     TermMatch{0, ep.path.size()}, id));
                f.message = "state-changing endpoint " + ep.method_string + " " + ep.path +
                            " with auth type none; actions on a user's behalf require OAuth";
                findings.push_back(std::move(f));
            }
        }
    }
    return findings;
}

std::vector<Finding> d5_functionality_squatting(const Corpus& corpus,
                                                const DetectorConfig& config) {
    std::vector<Finding> findings;

    for (const std::string& brand_domain : config.brand_lexicon) {
        const std::string token = brand_token(brand_domain);
        if (token.empty()) continue;

        struct Mention {
            const CorpusEntry* entry;
            TermMatch match;
            bool first_party;
        };
        std::vector<Mention> mentions;
        for (const CorpusEntry& entry : corpus.plugins) {
            const std::string& desc = entry.manifest.description_for_model;
            if (desc.empty()) continue;
            if (const auto match = find_term(desc, token)) {
                mentions.push_back(Mention{
                    &entry, *match,
                    same_registrable_domain(entry.manifest.source_host, brand_domain)});
            }
        }

        std::size_t first_party_count = 0;
        for (const Mention& m : mentions) first_party_count += m.first_party ? 1 : 0;

        for (const Mention& m : mentions) {
            if (m.first_party) continue;
            const PluginManifest& manifest = m.entry->manifest;
            Finding f = make_finding("D5", coord_functionality_squatting(), Severity::medium);
            f.plugin_ids = {manifest.plugin_id};
            f.evidence.push_back(span_from_match(EvidenceLocation::description_for_model, "",
                                                 manifest.description_for_model, m.match,
                                                 manifest.plugin_id));
            f.message = "description targets " + brand_domain + " but the plugin is hosted on " +
                        manifest.source_host;
            findings.push_back(std::move(f));
        }

        if (first_party_count == 1) {
            const Mention* first_party = nullptr;
            for (const Mention& m : mentions) {
                if (m.first_party) first_party = &m;
            }
            for (const Mention& m : mentions) {
                if (m.first_party) continue;
                Finding f = make_finding("D5", coord_functionality_squatting(), Severity::medium);
                f.plugin_ids = {first_party->entry->manifest.plugin_id,
                                m.entry->manifest.plugin_id};
                std::sort(f.plugin_ids.begin(), f.plugin_ids.end());
                f.evidence.push_back(span_from_match(
                    EvidenceLocation::description_for_model, "",
                    first_party->entry->manifest.description_for_model, first_party->match,
                    first_party->entry->manifest.plugin_id));
                f.evidence.push_back(span_from_match(
                    EvidenceLocation::description_for_model, "",
                    m.entry->manifest.description_for_model, m.match,
                    m.entry->manifest.plugin_id));
                f.message = "third party " + m.entry->manifest.plugin_id +
                            " competes for prompts aimed at " + brand_domain +
                            ", whose first-party plugin is " +
                            first_party->entry->manifest.plugin_id;
                findings.push_back(std::move(f));
            }
        }
    }
    return findings;
}

std::vector<Finding> d6_broad_api_spec(const Corpus& corpus, const DetectorConfig& config) {
    std::vector<Finding> findings;
    for (const CorpusEntry& entry : corpus.plugins) {
        const std::string& id = entry.manifest.plugin_id;

        if (entry.spec) {
            for (const PropertyRef& ref : all_property_refs(*entry.spec)) {
                const std::string source = property_source_text(*ref.property);
                std::vector<EvidenceSpan> spans =
                    lexicon_spans(config.conversation_param_lexicon, source,
                                  EvidenceLocation::spec_property, ref.detail, id);
                if (spans.empty()) continue;
                Finding f = make_finding("D6", coord_broad_api(), Severity::high);
                f.plugin_ids = {id};
                f.evidence = std::move(spans);
                f.message = "parameter '" + ref.detail +
                            "' requests conversation content beyond the prompt";
                findings.push_back(std::move(f));
            }
        }

        // Breadth asymmetry: the user is told a narrower scope than the model.
        const std::string& model_desc = entry.manifest.description_for_model;
        const std::string& human_desc = entry.manifest.description_for_human;
        if (model_desc.empty() || human_desc.empty()) continue;

        const std::vector<std::string> model_tokens = content_tokens(model_desc);
        const std::set<std::string> model_set(model_tokens.begin(), model_tokens.end());
        std::optional<TermMatch> commerce_in_model;
        for (std::string_view term : kCommerceTerms) {
            if (model_set.count(std::string(term)) > 0) {
                commerce_in_model = find_term(model_desc, term);
                break;
            }
        }
        if (!commerce_in_model) continue;

        const std::vector<Token> human_tokens = scan_tokens(human_desc);
        std::vector<int> commerce_positions;
        for (std::size_t i = 0; i < human_tokens.size(); ++i) {
            const std::string lower = to_lower(human_tokens[i].text);
            if (std::find(kCommerceTerms.begin(), kCommerceTerms.end(), lower) !=
                kCommerceTerms.end()) {
                commerce_positions.push_back(static_cast<int>(i));
            }
        }
        std::optional<Token> qualifier;
        for (std::size_t i = 0; i < human_tokens.size() && !qualifier; ++i) {
            const std::string lower = to_lower(human_tokens[i].text);
            if (is_stopword(lower) || model_set.count(lower) > 0) continue;
            for (int pos : commerce_positions) {
                if (std::abs(pos - static_cast<int>(i)) <= 2) {
                    qualifier = human_tokens[i];
                    break;
                }
            }
        }
        if (!qualifier) continue;

        Finding f = make_finding("D6", coord_broad_api(), Severity::low);
        f.plugin_ids = {id};
        f.evidence.push_back(span_from_match(
            EvidenceLocation::description_for_model, "", model_desc, *commerce_in_model, id));
        f.evidence.push_back(span_from_match(EvidenceLocation::description_for_human, "",
                                             human_desc,
                                             TermMatch{qualifier->begin, qualifier->end}, id));
        f.message = "model-facing scope omits the qualifier '" + to_lower(qualifier->text) +
                    "' present in the user-facing description";
        findings.push_back(std::move(f));
    }
    return findings;
}

std::vector<Finding> d7_policy_violations(const Corpus& corpus,
                                          const DetectorConfig& config) {
    std::vector<Finding> findings;
    for (const CorpusEntry& entry : corpus.plugins) {
        const PluginManifest& m = entry.manifest;
        const std::string& id = m.plugin_id;

        std::vector<EvidenceSpan> name_spans;
        auto sweep = [&](std::string_view source, EvidenceLocation location,
                         const char* detail) {
            for (EvidenceSpan& s : lexicon_spans(config.forbidden_name_words, source,
                                                 location, detail, id)) {
                name_spans.push_back(std::move(s));
            }
        };
        sweep(m.name_for_model, EvidenceLocation::manifest_field, "name_for_model");
        sweep(m.name_for_human, EvidenceLocation::manifest_field, "name_for_human");
        sweep(m.description_for_model, EvidenceLocation::description_for_model, "");
        sweep(m.description_for_human, EvidenceLocation::description_for_human, "");
        if (!name_spans.empty()) {
            Finding f = make_finding("D7", coord_deceptive_design(), Severity::info);
            f.plugin_ids = {id};
            f.evidence = std::move(name_spans);
            f.message = "name or description uses reserved platform words";
            findings.push_back(std::move(f));
        }

        if (!m.description_for_model.empty()) {
            std::vector<EvidenceSpan> pay_spans =
                lexicon_spans(config.payment_lexicon, m.description_for_model,
                              EvidenceLocation::description_for_model, "", id);
            if (!pay_spans.empty()) {
                Finding f = make_finding("D7", coord_deceptive_design(), Severity::medium);
                f.plugin_ids = {id};
                f.evidence = std::move(pay_spans);
                f.message = "model-facing description carries payment directives";
                findings.push_back(std::move(f));
            }
        }

        if (entry.spec) {
            for (const PropertyRef& ref : all_property_refs(*entry.spec)) {
                const bool named_instructions =
                    to_lower(ref.property->name) == "instructions";
                bool described_instructions = false;
                if (ref.property->description) {
                    const std::string& d = *ref.property->description;
                    described_instructions = find_term(d, "instructions for chatgpt") ||
                                             find_term(d, "instructions for the model") ||
                                             find_term(d, "instructions for the llm");
                }
                if (!named_instructions && !described_instructions) continue;

                const std::string source = property_source_text(*ref.property);
                Finding f = make_finding("D7", coord_response_injection(), Severity::high);
                f.plugin_ids = {id};
                f.evidence.push_back(span_from_match(
                    EvidenceLocation::spec_property, ref.detail, source,
                    TermMatch{0, ref.property->name.size()}, id));
                f.message = "schema declares a model-facing '" + ref.property->name +
                            "' field; responses must not instruct the model";
                findings.push_back(std::move(f));
            }
        }
    }
    return findings;
}

std::vector<Finding> d8_description_divergence(const Corpus& corpus,
                                               const DetectorConfig& config) {
    std::vector<Finding> findings;
    for (const CorpusEntry& entry : corpus.plugins) {
        const PluginManifest& m = entry.manifest;
        const std::string& id = m.plugin_id;
        const bool model_empty = m.description_for_model.empty();
        const bool human_empty = m.description_for_human.empty();

        if (model_empty || human_empty) {
            // Degenerate input: lexicon checks are suppressed for the empty
            // field, so surface the data-quality gap once per plugin.
            Finding f = make_finding("D8", coord_functionality_lying(), Severity::info);
            f.plugin_ids = {id};
            if (model_empty) {
                f.evidence.push_back(
                    EvidenceSpan{EvidenceLocation::description_for_model, "", "", 0, 0, id});
            }
            if (human_empty) {
                f.evidence.push_back(
                    EvidenceSpan{EvidenceLocation::description_for_human, "", "", 0, 0, id});
            }
            f.message = "empty description field limits static analysis";
            findings.push_back(std::move(f));
            continue;
        }

        const double similarity = jaccard_tokens(content_tokens(m.description_for_model),
                                                 content_tokens(m.description_for_human));
        if (similarity >= config.divergence_threshold) continue;

        Finding f = make_finding("D8", coord_functionality_lying(), Severity::medium);
        f.plugin_ids = {id};
        f.evidence.push_back(full_span(EvidenceLocation::description_for_model, "",
                                       m.description_for_model, id));
        f.evidence.push_back(full_span(EvidenceLocation::description_for_human, "",
                                       m.description_for_human, id));
        f.message = "model-facing and user-facing descriptions diverge (similarity " +
                    format_fraction(similarity) + ")";
        findings.push_back(std::move(f));
    }
    return findings;
}

std::vector<Finding> d9_transport_and_domain(const Corpus& corpus,
                                             const DetectorConfig& config) {
    (void)config;
    std::vector<Finding> findings;
    for (const CorpusEntry& entry : corpus.plugins) {
        const PluginManifest& m = entry.manifest;
        const std::string& id = m.plugin_id;

        auto flag_plain_transport = [&](const std::string& url, EvidenceLocation location,
                                        std::string detail, std::string_view source) {
            const auto parsed = parse_url(url);
            if (!parsed || parsed->scheme == "https") return;
            Finding f = make_finding("D9", coord_response_injection(), Severity::high);
            f.plugin_ids = {id};
            f.evidence.push_back(full_span(location, std::move(detail), source, id));
            f.message = "non-https transport at " + url +
                        "; an on-path party can alter plugin traffic";
            findings.push_back(std::move(f));
        };

        flag_plain_transport(m.api_url, EvidenceLocation::manifest_field, "api_url",
                             m.api_url);
        if (entry.spec) {
            for (std::size_t i = 0; i < entry.spec->server_urls.size(); ++i) {
                const std::string& server = entry.spec->server_urls[i];
                const std::string slot = "servers[" + std::to_string(i) + "]";
                flag_plain_transport(server, EvidenceLocation::spec_endpoint, slot, server);

                const auto parsed = parse_url(server);
                if (!parsed) continue;  // relative server URLs stay on-host
                if (!same_registrable_domain(parsed->host, m.source_host)) {
                    Finding f = make_finding("D9", coord_offsite_data_flow(), Severity::medium);
                    f.plugin_ids = {id};
                    f.evidence.push_back(
                        full_span(EvidenceLocation::spec_endpoint, slot, server, id));
                    f.message = "spec server " + parsed->host +
                                " is outside the plugin's root domain " +
                                registrable_domain(m.source_host);
                    findings.push_back(std::move(f));
                }
            }
        }

        for (const RedirectNotice& notice : entry.redirect_notices) {
            Finding f = make_finding("D9", coord_offsite_data_flow(), Severity::low);
            f.plugin_ids = {id};
            f.evidence.push_back(full_span(EvidenceLocation::manifest_field, "api_url",
                                           m.api_url, id));
            f.message = "cross-host redirect while fetching " + notice.from_url + " -> " +
                        notice.to_url;
            findings.push_back(std::move(f));
        }
    }
    return findings;
}

std::vector<Finding> d10_manifest_drift(const std::vector<DriftRecord>& drift,
                                        const Corpus* newer) {
    std::vector<Finding> findings;
    for (const DriftRecord& record : drift) {
        const CorpusEntry* entry = newer ? newer->find(record.plugin_id) : nullptr;

        Finding f = make_finding("D10", coord_functionality_lying(), Severity::info);
        f.plugin_ids = {record.plugin_id};

        if (record.kind != DriftKind::changed) {
            f.severity = Severity::info;
            const std::string name = entry ? entry->manifest.name_for_model : "";
            f.evidence.push_back(full_span(EvidenceLocation::manifest_field,
                                           "name_for_model", name, record.plugin_id));
            f.message = "plugin " + drift_kind_name(record.kind) + " between snapshots";
            findings.push_back(std::move(f));
            continue;
        }

        bool routing_relevant = false;
        std::string field_list;
        for (const DriftField field : record.changed_fields) {
            if (field == DriftField::description_for_model ||
                field == DriftField::auth_type || field == DriftField::endpoint_set) {
                routing_relevant = true;
            }
            if (!field_list.empty()) field_list += ", ";
            field_list += drift_field_name(field);

            switch (field) {
                case DriftField::description_for_model:
                    f.evidence.push_back(full_span(
                        EvidenceLocation::description_for_model, "",
                        entry ? entry->manifest.description_for_model : "", record.plugin_id));
                    break;
                case DriftField::description_for_human:
                    f.evidence.push_back(full_span(
                        EvidenceLocation::description_for_human, "",
                        entry ? entry->manifest.description_for_human : "", record.plugin_id));
                    break;
                case DriftField::auth_type:
                    f.evidence.push_back(full_span(
                        EvidenceLocation::manifest_field, "auth.type",
                        entry ? entry->manifest.auth.type_string() : "", record.plugin_id));
                    break;
                case DriftField::endpoint_set:
                case DriftField::schema_property_set:
                case DriftField::api_url:
                    f.evidence.push_back(full_span(EvidenceLocation::manifest_field,
                                                   "api_url",
                                                   entry ? entry->manifest.api_url : "",
                                                   record.plugin_id));
                    break;
                default:
                    f.evidence.push_back(full_span(
                        EvidenceLocation::manifest_field, "name_for_model",
                        entry ? entry->manifest.name_for_model : "", record.plugin_id));
                    break;
            }
        }
        if (f.evidence.empty()) continue;

        f.severity = routing_relevant ? Severity::medium : Severity::info;
        f.message = "plugin changed between snapshots: " + field_list;
        findings.push_back(std::move(f));
    }
    return findings;
}

std::vector<Finding> run_all(const Corpus& corpus, const DetectorConfig& config,
                             const std::vector<DriftRecord>& drift, int parallelism) {
    using DetectorFn = std::function<std::vector<Finding>()>;
    const std::vector<DetectorFn> detectors = {
        [&] { return d1_plugin_squatting(corpus, config); },
        [&] { return d2_topic_squatting(corpus, config); },
        [&] { return d3_session_hijack_directive(corpus, config); },
        [&] { return d4_credential_exfiltration(corpus, config); },
        [&] { return d5_functionality_squatting(corpus, config); },
        [&] { return d6_broad_api_spec(corpus, config); },
        [&] { return d7_policy_violations(corpus, config); },
        [&] { return d8_description_divergence(corpus, config); },
        [&] { return d9_transport_and_domain(corpus, config); },
        [&] { return d10_manifest_drift(drift, &corpus); },
    };

    std::vector<Finding> findings;
    if (parallelism > 1) {
        std::vector<std::future<std::vector<Finding>>> futures;
        futures.reserve(detectors.size());
        for (const DetectorFn& fn : detectors) {
            futures.push_back(std::async(std::launch::async, fn));
        }
        for (auto& future : futures) {
            for (Finding& f : future.get()) findings.push_back(std::move(f));
        }
    } else {
        for (const DetectorFn& fn : detectors) {
            for (Finding& f : fn()) findings.push_back(std::move(f));
        }
    }
    sort_findings(findings);
    return findings;
}

namespace {

const SchemaProperty* walk_property_path(const std::vector<SchemaProperty>& properties,
                                         std::string_view dotted) {
    const std::size_t dot = dotted.find('.');
    const std::string_view head = dot == std::string_view::npos ? dotted : dotted.substr(0, dot);
    for (const SchemaProperty& prop : properties) {
        if (prop.name == head) {
            if (dot == std::string_view::npos) return &prop;
            return walk_property_path(prop.children, dotted.substr(dot + 1));
        }
    }
    return nullptr;
}

}  // namespace

std::optional<std::string> evidence_source_text(const Corpus& corpus,
                                                const Finding& finding,
                                                const EvidenceSpan& span) {
    const std::string& plugin_id =
        span.plugin_id.empty()
            ? (finding.plugin_ids.empty() ? std::string() : finding.plugin_ids.front())
            : span.plugin_id;
    const CorpusEntry* entry = corpus.find(plugin_id);
    if (entry == nullptr) return std::nullopt;
    const PluginManifest& m = entry->manifest;

    switch (span.location) {
        case EvidenceLocation::description_for_model:
            return m.description_for_model;
        case EvidenceLocation::description_for_human:
            return m.description_for_human;
        case EvidenceLocation::privacy_policy:
            return entry->privacy_policy_text;
        case EvidenceLocation::manifest_field: {
            if (span.detail == "name_for_model") return m.name_for_model;
            if (span.detail == "name_for_human") return m.name_for_human;
            if (span.detail == "api_url") return m.api_url;
            if (span.detail == "source_host") return m.source_host;
            if (span.detail == "auth.type") return m.auth.type_string();
            if (span.detail == "schema_version") return m.schema_version;
            if (span.detail == "logo_url") return m.logo_url.value_or("");
            if (span.detail == "contact_email") return m.contact_email.value_or("");
            if (span.detail == "legal_info_url") return m.legal_info_url.value_or("");
            return std::nullopt;
        }
        case EvidenceLocation::spec_endpoint: {
            if (!entry->spec) return std::nullopt;
            if (span.detail.rfind("servers[", 0) == 0) {
                const std::size_t index =
                    std::strtoul(span.detail.c_str() + 8, nullptr, 10);
                if (index >= entry->spec->server_urls.size()) return std::nullopt;
                return entry->spec->server_urls[index];
            }
            for (const Endpoint& ep : entry->spec->endpoints) {
                if (ep.path == span.detail) return endpoint_source_text(ep);
            }
            return std::nullopt;
        }
        case EvidenceLocation::spec_property: {
            if (!entry->spec) return std::nullopt;
            const std::size_t hash = span.detail.find('#');
            if (hash != std::string::npos) {
                const std::string path = span.detail.substr(0, hash);
                const std::string_view rest = std::string_view(span.detail).substr(hash + 1);
                for (const Endpoint& ep : entry->spec->endpoints) {
                    if (ep.path != path) continue;
                    if (const SchemaProperty* prop = walk_property_path(ep.parameters, rest)) {
                        return property_source_text(*prop);
                    }
                }
                return std::nullopt;
            }
            for (const auto& [schema_name, root] : entry->spec->schemas) {
                const std::string prefix = schema_name + ".";
                if (span.detail.rfind(prefix, 0) != 0) continue;
                const std::string_view rest =
                    std::string_view(span.detail).substr(prefix.size());
                if (const SchemaProperty* prop = walk_property_path(root.children, rest)) {
                    return property_source_text(*prop);
                }
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace plugaudit
