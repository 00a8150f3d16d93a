#pragma once

// Post-interview analysis: categorize constructs, map them to aesthetics and
// count usage per study.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaw/json_io.hpp"
#include "gaw/model.hpp"
#include "gaw/rgt.hpp"

namespace gaw::analysis {

enum class Category { visual_mapping, composition, data_related, visual_experience };

std::string_view to_string(Category c);
Category category_from_string(std::string_view s);
/// Only these categories describe aesthetics and may be mapped.
bool mappable(Category c);

/// A catalog aesthetic or a newly elicited one. Keys are the metric id, or
/// "novel:<name>" for aesthetics outside the catalog.
struct Aesthetic {
    std::optional<MetricId> metric;
    std::string novel_name;

    std::string key() const;
    std::string display_name() const;
    bool operator==(const Aesthetic& o) const { return key() == o.key(); }
};

/// Metric id, "novel:<name>", or any other free text (taken as a novel name).
Aesthetic parse_aesthetic(std::string_view text);

struct CategoryTag {
    std::string construct_id;
    Category category;
    std::string analyst;
};

struct AestheticMapping {
    std::string construct_id;
    Aesthetic aesthetic;
    std::string analyst;
};

struct ConstructRef {
    std::string study;
    std::string participant;
    rgt::Construct construct;
};

/// Tags and mappings over a corpus of exported sessions grouped by study.
class Workbook {
public:
    explicit Workbook(std::string primary_analyst = "primary") : primary_(std::move(primary_analyst)) {}

    const std::string& primary_analyst() const { return primary_; }
    void set_primary_analyst(std::string a) { primary_ = std::move(a); }

    /// Adds a session's constructs under a study label. Re-adding the same
    /// session replaces it.
    void add_session(const std::string& study, const rgt::SessionRecord& record);
    /// Registers a study label without sessions.
    void add_study(const std::string& study);
    /// Study labels in insertion order.
    const std::vector<std::string>& studies() const { return study_order_; }
    /// Distinct participant labels of a study.
    std::vector<std::string> participants(const std::string& study) const;
    const std::map<std::string, ConstructRef>& constructs() const { return constructs_; }

    /// Re-tagging by the same analyst replaces the tag; a mapping that the new
    /// category no longer allows is dropped. Throws not_found.
    CategoryTag tag(const std::string& construct_id, Category c, const std::string& analyst);
    /// Throws not_found for an unknown construct and precondition_failed unless
    /// the analyst tagged it visual_mapping or composition.
    AestheticMapping map(const std::string& construct_id, const Aesthetic& a, const std::string& analyst);

    std::optional<CategoryTag> tag_of(const std::string& construct_id, const std::string& analyst) const;
    std::optional<AestheticMapping> mapping_of(const std::string& construct_id, const std::string& analyst) const;

    Json to_json() const;
    static Workbook from_json(const Json& j);

private:
    std::string primary_;
    std::vector<std::string> study_order_;
    std::map<std::string, ConstructRef> constructs_;
    std::map<std::pair<std::string, std::string>, Category> tags_;    // (construct, analyst)
    std::map<std::pair<std::string, std::string>, Aesthetic> maps_;   // (construct, analyst)
};

struct UsageRow {
    std::string key;
    std::string display_name;
    bool evaluated = false;
    bool novel = false;       // newer catalog entry or elicited outside the catalog
    bool in_catalog = false;
    std::vector<std::size_t> counts;  // per study: distinct participants
};

struct UsageReport {
    std::vector<std::string> studies;
    std::vector<std::size_t> participants;
    std::vector<UsageRow> rows;  // catalog order, then other novel names sorted

    const UsageRow* row(std::string_view key) const;
};

/// Distinct participants per study with at least one construct mapped to each
/// aesthetic by the primary analyst. `studies` empty means all, in order.
UsageReport usage_report(const Workbook& w, std::vector<std::string> studies = {});

struct StudyCoverage {
    std::string study;
    std::size_t participants = 0;
    double catalog_coverage = 0.0;    // of all 31 catalog entries
    double published_coverage = 0.0;  // of the 29 literature entries
    double evaluated_coverage = 0.0;  // of the 13 evaluated entries
    double mean_usage_rate = 0.0;     // mean count/participants over the aesthetics this study used
};

struct ReproducibilityReport {
    std::vector<StudyCoverage> studies;
    std::vector<std::string> used_by_all;   // literature entries
    std::vector<std::string> used_by_some;
    std::vector<std::string> used_by_none;
    /// Over the literature aesthetics used by every study: pooled
    /// participants using it / pooled participants, averaged.
    double mean_usage_rate = 0.0;
};

ReproducibilityReport reproducibility_report(const UsageReport& u);

struct CategoryDistribution {
    std::map<Category, std::size_t> counts;
    std::size_t untagged = 0;
    std::size_t total = 0;
};

CategoryDistribution category_distribution(const Workbook& w, std::vector<std::string> studies = {});

struct Disagreement {
    std::string construct_id;
    std::map<std::string, std::string> by_analyst;  // analyst -> "category" or "category -> aesthetic"
};

/// Constructs whose tags or mappings differ between analysts.
std::vector<Disagreement> disagreements(const Workbook& w);

/// Layout: name | evaluated | one column per study, "-" for zero.
std::string render_usage_table(const UsageReport& u);
std::string render_reproducibility(const ReproducibilityReport& r);

Json to_json(const UsageReport& u);
Json to_json(const ReproducibilityReport& r);
Json to_json(const CategoryDistribution& c);
Json to_json(const std::vector<Disagreement>& d);

}  // namespace gaw::analysis
