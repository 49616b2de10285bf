#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plugaudit {

/// The pair of actors attacking / being attacked.
enum class Stakeholders { plugin_user, plugin_platform, plugin_plugin };

std::string stakeholders_name(Stakeholders s);
std::string stakeholders_display_name(Stakeholders s);
std::optional<Stakeholders> stakeholders_from_name(std::string_view name);

/// Addresses one row of the embedded attack-surface registry. Instances can
/// only be obtained for rows that exist, so a coordinate always resolves.
class TaxonomyCoordinate {
public:
    static std::optional<TaxonomyCoordinate> make(Stakeholders stakeholders,
                                                  std::string_view goal_id,
                                                  std::string_view method_id);

    Stakeholders stakeholders() const { return stakeholders_; }
    const std::string& goal_id() const { return goal_id_; }
    const std::string& method_id() const { return method_id_; }

    /// "stakeholders/goal/method" — stable report key.
    std::string key() const;

    friend auto operator<=>(const TaxonomyCoordinate&, const TaxonomyCoordinate&) = default;

private:
    friend const std::vector<struct TaxonomyEntry>& taxonomy_entries();
    TaxonomyCoordinate(Stakeholders s, std::string goal, std::string method)
        : stakeholders_(s), goal_id_(std::move(goal)), method_id_(std::move(method)) {}

    Stakeholders stakeholders_;
    std::string goal_id_;
    std::string method_id_;
};

struct TaxonomyEntry {
    TaxonomyCoordinate coordinate;
    std::string goal_label;
    std::string method_label;
    std::string section_ref;  // framework row locator, e.g. "4.2.4"
    std::optional<std::string> example_risk_label;
    bool static_detectable = false;  // observable from manifest/spec text alone
};

/// All registry rows in table order. Immutable after first use.
const std::vector<TaxonomyEntry>& taxonomy_entries();

/// Unique entry for a (goal, method) slug pair, or nullptr. Goal slugs are
/// disambiguated where the same label appears under two stakeholder pairs, so
/// the pair is a key.
const TaxonomyEntry* taxonomy_lookup(std::string_view goal_id, std::string_view method_id);

const TaxonomyEntry* taxonomy_lookup(const TaxonomyCoordinate& coordinate);

std::vector<TaxonomyEntry> list_static_detectable();

/// Registry as a canonical JSON document (for `taxonomy export`).
std::string taxonomy_to_json();

}  // namespace plugaudit
