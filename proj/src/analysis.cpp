#include "gaw/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "gaw/error.hpp"

namespace gaw::analysis {

namespace {

constexpr std::string_view kNovelPrefix = "novel:";

std::vector<std::string> select_studies(const Workbook& w, std::vector<std::string> studies) {
    if (studies.empty()) return w.studies();
    for (const auto& s : studies) {
        if (std::find(w.studies().begin(), w.studies().end(), s) == w.studies().end()) {
            throw Error(Errc::not_found, "unknown study '" + s + "'");
        }
    }
    return studies;
}

std::string percent(double f) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * f);
    return buf;
}

}  // namespace

std::string_view to_string(Category c) {
    switch (c) {
        case Category::visual_mapping: return "visual_mapping";
        case Category::composition: return "composition";
        case Category::data_related: return "data_related";
        case Category::visual_experience: return "visual_experience";
    }
    return "visual_mapping";
}

Category category_from_string(std::string_view s) {
    for (auto c : {Category::visual_mapping, Category::composition, Category::data_related,
                   Category::visual_experience}) {
        if (to_string(c) == s) return c;
    }
    throw Error(Errc::invalid_argument, "unknown category '" + std::string(s) + "'");
}

bool mappable(Category c) { return c == Category::visual_mapping || c == Category::composition; }

std::string Aesthetic::key() const {
    if (metric) return std::string(gaw::to_string(*metric));
    return std::string(kNovelPrefix) + novel_name;
}

std::string Aesthetic::display_name() const {
    if (metric) return std::string(catalog_entry(*metric).display_name);
    return novel_name;
}

Aesthetic parse_aesthetic(std::string_view text) {
    Aesthetic a;
    if (auto id = parse_metric_id(text)) {
        a.metric = id;
        return a;
    }
    if (text.substr(0, kNovelPrefix.size()) == kNovelPrefix) text.remove_prefix(kNovelPrefix.size());
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw Error(Errc::invalid_argument, "aesthetic name is empty");
    a.novel_name = std::string(text);
    return a;
}

// --- workbook -------------------------------------------------------------------

void Workbook::add_study(const std::string& study) {
    if (std::find(study_order_.begin(), study_order_.end(), study) == study_order_.end()) study_order_.push_back(study);
}

void Workbook::add_session(const std::string& study, const rgt::SessionRecord& record) {
    add_study(study);
    const auto participant = record.participant();
    for (auto& c : record.constructs()) {
        const auto id = c.id;
        constructs_.insert_or_assign(id, ConstructRef{study, participant, std::move(c)});
    }
}

std::vector<std::string> Workbook::participants(const std::string& study) const {
    std::set<std::string> out;
    for (const auto& [id, ref] : constructs_) {
        if (ref.study == study) out.insert(ref.participant);
    }
    return {out.begin(), out.end()};
}

CategoryTag Workbook::tag(const std::string& construct_id, Category c, const std::string& analyst) {
    if (!constructs_.count(construct_id)) throw Error(Errc::not_found, "unknown construct " + construct_id);
    if (analyst.empty()) throw Error(Errc::invalid_argument, "analyst label is empty");
    tags_[{construct_id, analyst}] = c;
    if (!mappable(c)) maps_.erase({construct_id, analyst});
    return {construct_id, c, analyst};
}

AestheticMapping Workbook::map(const std::string& construct_id, const Aesthetic& a, const std::string& analyst) {
    if (!constructs_.count(construct_id)) throw Error(Errc::not_found, "unknown construct " + construct_id);
    const auto t = tags_.find({construct_id, analyst});
    if (t == tags_.end()) {
        throw Error(Errc::precondition_failed, "construct " + construct_id + " has no tag by " + analyst);
    }
    if (!mappable(t->second)) {
        throw Error(Errc::precondition_failed, "construct " + construct_id + " is tagged " +
                                                   std::string(to_string(t->second)) + " and cannot be mapped");
    }
    maps_.insert_or_assign({construct_id, analyst}, a);
    return {construct_id, a, analyst};
}

std::optional<CategoryTag> Workbook::tag_of(const std::string& construct_id, const std::string& analyst) const {
    if (auto it = tags_.find({construct_id, analyst}); it != tags_.end()) return CategoryTag{construct_id, it->second, analyst};
    return std::nullopt;
}

std::optional<AestheticMapping> Workbook::mapping_of(const std::string& construct_id, const std::string& analyst) const {
    if (auto it = maps_.find({construct_id, analyst}); it != maps_.end()) {
        return AestheticMapping{construct_id, it->second, analyst};
    }
    return std::nullopt;
}

Json Workbook::to_json() const {
    Json tags = Json::array(), maps = Json::array();
    for (const auto& [k, c] : tags_) tags.push_back({{"construct", k.first}, {"analyst", k.second}, {"category", to_string(c)}});
    for (const auto& [k, a] : maps_) maps.push_back({{"construct", k.first}, {"analyst", k.second}, {"aesthetic", a.key()}});
    return Json{{"primary_analyst", primary_}, {"tags", tags}, {"mappings", maps}};
}

Workbook Workbook::from_json(const Json& j) {
    // Tags and mappings only; constructs come from session exports, so the
    // caller re-adds sessions first when it wants checks.
    Workbook w(j.value("primary_analyst", "primary"));
    try {
        for (const auto& t : j.at("tags")) {
            w.tags_[{t.at("construct").get<std::string>(), t.at("analyst").get<std::string>()}] =
                category_from_string(t.at("category").get<std::string>());
        }
        for (const auto& m : j.at("mappings")) {
            w.maps_.insert_or_assign({m.at("construct").get<std::string>(), m.at("analyst").get<std::string>()},
                                     parse_aesthetic(m.at("aesthetic").get<std::string>()));
        }
    } catch (const Json::exception& e) {
        throw Error(Errc::malformed_payload, std::string("workbook: ") + e.what());
    }
    return w;
}

// --- reports ----------------------------------------------------------------------

const UsageRow* UsageReport::row(std::string_view key) const {
    for (const auto& r : rows) {
        if (r.key == key) return &r;
    }
    return nullptr;
}

UsageReport usage_report(const Workbook& w, std::vector<std::string> studies) {
    UsageReport u;
    u.studies = select_studies(w, std::move(studies));
    for (const auto& s : u.studies) u.participants.push_back(w.participants(s).size());

    // aesthetic key -> study index -> participants
    std::map<std::string, std::vector<std::set<std::string>>> users;
    std::map<std::string, Aesthetic> seen;
    for (const auto& [id, ref] : w.constructs()) {
        const auto m = w.mapping_of(id, w.primary_analyst());
        if (!m) continue;
        const auto it = std::find(u.studies.begin(), u.studies.end(), ref.study);
        if (it == u.studies.end()) continue;
        auto& slot = users[m->aesthetic.key()];
        slot.resize(u.studies.size());
        slot[static_cast<std::size_t>(it - u.studies.begin())].insert(ref.participant);
        seen.emplace(m->aesthetic.key(), m->aesthetic);
    }
    auto counts_for = [&](const std::string& key) {
        std::vector<std::size_t> c(u.studies.size(), 0);
        if (auto it = users.find(key); it != users.end()) {
            for (std::size_t i = 0; i < it->second.size(); ++i) c[i] = it->second[i].size();
        }
        return c;
    };
    for (const auto& e : catalog()) {
        const std::string key(gaw::to_string(e.id));
        u.rows.push_back({key, std::string(e.display_name), e.evaluated, e.novel, true, counts_for(key)});
    }
    for (const auto& [key, a] : seen) {
        if (a.metric) continue;
        u.rows.push_back({key, a.display_name(), false, true, false, counts_for(key)});
    }
    return u;
}

ReproducibilityReport reproducibility_report(const UsageReport& u) {
    ReproducibilityReport r;
    const std::size_t k = u.studies.size();
    std::size_t published = 0, evaluated = 0;
    for (const auto& row : u.rows) {
        if (!row.in_catalog) continue;
        published += row.novel ? 0 : 1;
        evaluated += row.evaluated ? 1 : 0;
    }
    for (std::size_t s = 0; s < k; ++s) {
        StudyCoverage c;
        c.study = u.studies[s];
        c.participants = u.participants[s];
        std::size_t used = 0, used_published = 0, used_evaluated = 0;
        double rate_sum = 0.0;
        for (const auto& row : u.rows) {
            if (!row.in_catalog || row.counts[s] == 0) continue;
            ++used;
            used_published += row.novel ? 0 : 1;
            used_evaluated += row.evaluated ? 1 : 0;
            rate_sum += static_cast<double>(row.counts[s]) / static_cast<double>(c.participants);
        }
        c.catalog_coverage = static_cast<double>(used) / static_cast<double>(kMetricCount);
        c.published_coverage = static_cast<double>(used_published) / static_cast<double>(published);
        c.evaluated_coverage = static_cast<double>(used_evaluated) / static_cast<double>(evaluated);
        c.mean_usage_rate = used ? rate_sum / static_cast<double>(used) : 0.0;
        r.studies.push_back(c);
    }
    std::size_t pooled_participants = 0;
    for (auto p : u.participants) pooled_participants += p;
    double rate_sum = 0.0;
    for (const auto& row : u.rows) {
        if (!row.in_catalog || row.novel) continue;
        const auto users = std::count_if(row.counts.begin(), row.counts.end(), [](std::size_t c) { return c > 0; });
        if (k > 0 && static_cast<std::size_t>(users) == k) {
            r.used_by_all.push_back(row.key);
            std::size_t pooled = 0;
            for (auto c : row.counts) pooled += c;
            rate_sum += static_cast<double>(pooled) / static_cast<double>(pooled_participants);
        } else if (users > 0) {
            r.used_by_some.push_back(row.key);
        } else {
            r.used_by_none.push_back(row.key);
        }
    }
    if (!r.used_by_all.empty()) r.mean_usage_rate = rate_sum / static_cast<double>(r.used_by_all.size());
    return r;
}

CategoryDistribution category_distribution(const Workbook& w, std::vector<std::string> studies) {
    const auto selected = select_studies(w, std::move(studies));
    CategoryDistribution d;
    for (auto c : {Category::visual_mapping, Category::composition, Category::data_related,
                   Category::visual_experience}) {
        d.counts[c] = 0;
    }
    for (const auto& [id, ref] : w.constructs()) {
        if (std::find(selected.begin(), selected.end(), ref.study) == selected.end()) continue;
        ++d.total;
        if (auto t = w.tag_of(id, w.primary_analyst())) ++d.counts[t->category];
        else ++d.untagged;
    }
    return d;
}

std::vector<Disagreement> disagreements(const Workbook& w) {
    const auto j = w.to_json();
    std::map<std::string, std::map<std::string, std::string>> views;
    for (const auto& t : j.at("tags")) {
        views[t.at("construct").get<std::string>()][t.at("analyst").get<std::string>()] =
            t.at("category").get<std::string>();
    }
    for (const auto& m : j.at("mappings")) {
        views[m.at("construct").get<std::string>()][m.at("analyst").get<std::string>()] +=
            " -> " + m.at("aesthetic").get<std::string>();
    }
    std::vector<Disagreement> out;
    for (auto& [cid, by] : views) {
        std::set<std::string> distinct;
        for (const auto& [a, v] : by) distinct.insert(v);
        if (by.size() > 1 && distinct.size() > 1) out.push_back({cid, by});
    }
    return out;
}

std::string render_usage_table(const UsageReport& u) {
    std::size_t name_w = 9;
    for (const auto& r : u.rows) name_w = std::max(name_w, r.display_name.size());
    std::size_t col_w = 3;
    for (const auto& s : u.studies) col_w = std::max(col_w, s.size());
    std::ostringstream os;
    auto cell = [&](const std::string& s, std::size_t w) {
        os << s << std::string(w > s.size() ? w - s.size() : 0, ' ');
    };
    auto row_line = [&](const std::string& name, const std::string& eval, const std::vector<std::string>& cols) {
        cell(name, name_w);
        os << " | ";
        cell(eval, 9);
        for (const auto& c : cols) {
            os << " | ";
            cell(c, col_w);
        }
        os << '\n';
    };
    row_line("Aesthetic", "evaluated", u.studies);
    std::vector<std::string> sizes;
    for (auto p : u.participants) sizes.push_back("n=" + std::to_string(p));
    row_line("", "", sizes);
    bool novel_header = false;
    for (const auto& r : u.rows) {
        if (r.novel && !novel_header) {
            os << "-- novel aesthetics --\n";
            novel_header = true;
        }
        std::vector<std::string> cols;
        for (auto c : r.counts) cols.push_back(c ? std::to_string(c) : "-");
        row_line(r.display_name, r.evaluated ? "yes" : "", cols);
    }
    return os.str();
}

std::string render_reproducibility(const ReproducibilityReport& r) {
    std::ostringstream os;
    for (const auto& s : r.studies) {
        os << s.study << ": participants " << s.participants << ", catalog " << percent(s.catalog_coverage)
           << ", published " << percent(s.published_coverage) << ", evaluated " << percent(s.evaluated_coverage)
           << ", mean usage " << percent(s.mean_usage_rate) << '\n';
    }
    auto list = [&](const char* title, const std::vector<std::string>& v) {
        os << title << " (" << v.size() << "):";
        for (const auto& k : v) os << ' ' << k;
        os << '\n';
    };
    list("used by all", r.used_by_all);
    list("used by some", r.used_by_some);
    list("used by none", r.used_by_none);
    os << "mean usage rate over aesthetics used by all: " << percent(r.mean_usage_rate) << '\n';
    return os.str();
}

Json to_json(const UsageReport& u) {
    Json rows = Json::array();
    for (const auto& r : u.rows) {
        Json counts = Json::object();
        for (std::size_t i = 0; i < u.studies.size(); ++i) counts[u.studies[i]] = r.counts[i];
        rows.push_back({{"key", r.key},
                        {"name", r.display_name},
                        {"evaluated", r.evaluated},
                        {"novel", r.novel},
                        {"in_catalog", r.in_catalog},
                        {"counts", counts}});
    }
    return Json{{"studies", u.studies}, {"participants", u.participants}, {"rows", rows}};
}

Json to_json(const ReproducibilityReport& r) {
    Json studies = Json::array();
    for (const auto& s : r.studies) {
        studies.push_back({{"study", s.study},
                           {"participants", s.participants},
                           {"catalog_coverage", s.catalog_coverage},
                           {"published_coverage", s.published_coverage},
                           {"evaluated_coverage", s.evaluated_coverage},
                           {"mean_usage_rate", s.mean_usage_rate}});
    }
    return Json{{"studies", studies},
                {"used_by_all", r.used_by_all},
                {"used_by_some", r.used_by_some},
                {"used_by_none", r.used_by_none},
                {"mean_usage_rate", r.mean_usage_rate}};
}

Json to_json(const CategoryDistribution& c) {
    Json counts = Json::object();
    for (const auto& [cat, n] : c.counts) counts[std::string(to_string(cat))] = n;
    return Json{{"counts", counts}, {"untagged", c.untagged}, {"total", c.total}};
}

Json to_json(const std::vector<Disagreement>& d) {
    Json out = Json::array();
    for (const auto& x : d) out.push_back({{"construct", x.construct_id}, {"by_analyst", x.by_analyst}});
    return out;
}

}  // namespace gaw::analysis
