#include "gaw/rgt.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>

#include "gaw/error.hpp"
#include "gaw/hash.hpp"

namespace gaw::rgt {

namespace {

std::optional<std::string> opt_string(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

Json opt_json(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

std::string pair_key(std::string_view a, std::string_view b) {
    std::string x = normalize_pole(a), y = normalize_pole(b);
    if (y < x) std::swap(x, y);
    return x + '\x1f' + y;
}

std::string element_content_id(const Element& e) {
    if (e.drawing) return content_hash("drawing:" + canonical_text(*e.drawing));
    return content_hash("image:" + e.image.value_or(""));
}

void check_payload(const Element& e) {
    if (e.drawing.has_value() == e.image.has_value()) {
        throw Error(Errc::malformed_payload, "element needs exactly one of a drawing or an image");
    }
    if (e.drawing) {
        const auto problems = validate_drawing(*e.drawing);
        if (!problems.empty()) throw Error(Errc::malformed_payload, "invalid drawing: " + problems.front());
    }
    if (e.image && e.image->empty()) throw Error(Errc::malformed_payload, "image reference is empty");
}

/// All index combinations of size k out of n, lexicographic.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n || k == 0) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

SessionState state_from_string(std::string_view s) {
    if (s == "active") return SessionState::active;
    if (s == "finished") return SessionState::finished;
    throw Error(Errc::malformed_payload, "unknown session state '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(ElementOrigin o) {
    switch (o) {
        case ElementOrigin::generated: return "generated";
        case ElementOrigin::participant_drawn: return "participant_drawn";
        case ElementOrigin::placeholder: return "placeholder";
    }
    return "generated";
}

ElementOrigin element_origin_from_string(std::string_view s) {
    if (s == "generated") return ElementOrigin::generated;
    if (s == "participant_drawn") return ElementOrigin::participant_drawn;
    if (s == "placeholder") return ElementOrigin::placeholder;
    throw Error(Errc::malformed_payload, "unknown element origin '" + std::string(s) + "'");
}

std::string_view to_string(SessionState s) { return s == SessionState::active ? "active" : "finished"; }

std::string_view to_string(FinishReason r) {
    switch (r) {
        case FinishReason::none: return "none";
        case FinishReason::strike_limit: return "strike_limit";
        case FinishReason::interviewer: return "interviewer";
    }
    return "none";
}

std::string normalize_pole(std::string_view pole) {
    std::size_t b = 0, e = pole.size();
    while (b < e && std::isspace(static_cast<unsigned char>(pole[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(pole[e - 1]))) --e;
    std::string out(pole.substr(b, e - b));
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

Element drawing_element(const Drawing& d, ElementOrigin origin, std::string label) {
    Element e;
    e.origin = origin;
    e.label = std::move(label);
    e.drawing = d;
    check_payload(e);
    e.id = element_content_id(e);
    return e;
}

Element image_element(std::string image, ElementOrigin origin, std::string label) {
    Element e;
    e.origin = origin;
    e.label = std::move(label);
    e.image = std::move(image);
    check_payload(e);
    e.id = element_content_id(e);
    return e;
}

const Element* Study::find(std::string_view element_id) const {
    for (const auto& e : elements) {
        if (e.id == element_id) return &e;
    }
    return nullptr;
}

Study create_study(std::string name, std::vector<Element> elements, StudyConfig config) {
    if (config.triad_size < 2) throw Error(Errc::invalid_argument, "triad_size must be >= 2");
    if (config.strike_limit < 1) throw Error(Errc::invalid_argument, "strike_limit must be >= 1");
    if (elements.size() < config.triad_size) {
        throw Error(Errc::invalid_argument, "a study needs at least " + std::to_string(config.triad_size) +
                                                " elements, got " + std::to_string(elements.size()));
    }
    std::set<std::string> ids;
    std::string key = "study:" + name + "|" + std::to_string(config.strike_limit) + "|" +
                      std::to_string(config.triad_size);
    for (auto& e : elements) {
        check_payload(e);
        e.id = element_content_id(e);
        if (!ids.insert(e.id).second) throw Error(Errc::invalid_argument, "duplicate element " + e.id);
        key += "|" + e.id;
    }
    Study s;
    s.id = content_hash(key);
    s.name = std::move(name);
    s.elements = std::move(elements);
    s.config = config;
    return s;
}

// --- session ------------------------------------------------------------------

std::string Session::make_id(std::string_view study_id, std::string_view participant, std::uint64_t seed) {
    return content_hash("session:" + std::string(study_id) + "|" + std::string(participant) + "|" +
                        std::to_string(seed));
}

Session Session::start(const Study& study, std::string participant, std::uint64_t seed) {
    Json pool = Json::array();
    for (const auto& e : study.elements) pool.push_back(e.id);
    Session s;
    s.emit({{"type", "session_started"},
            {"session", make_id(study.id, participant, seed)},
            {"study", study.id},
            {"participant", participant},
            {"seed", seed},
            {"strike_limit", study.config.strike_limit},
            {"triad_size", study.config.triad_size},
            {"pool", pool}},
           std::nullopt);
    return s;
}

Session Session::replay(const Study& study, const std::vector<Json>& events) {
    if (events.empty() || events.front().value("type", "") != "session_started") {
        throw Error(Errc::malformed_payload, "event log must start with session_started");
    }
    if (events.front().at("study").get<std::string>() != study.id) {
        throw Error(Errc::conflict, "event log belongs to a different study");
    }
    Session s;
    try {
        for (const auto& ev : events) {
            s.apply(ev);
            s.events_.push_back(ev);
        }
    } catch (const Json::exception& e) {
        throw Error(Errc::malformed_payload, std::string("event log: ") + e.what());
    }
    return s;
}

Json Session::emit(Json event, const std::optional<std::string>& request_id) {
    event["seq"] = events_.size();
    if (request_id) event["request_id"] = *request_id;
    apply(event);
    events_.push_back(event);
    return event;
}

void Session::apply(const Json& ev) {
    const auto type = ev.at("type").get<std::string>();
    if (type == "session_started") {
        id_ = ev.at("session").get<std::string>();
        study_id_ = ev.at("study").get<std::string>();
        participant_ = ev.at("participant").get<std::string>();
        seed_ = ev.at("seed").get<std::uint64_t>();
        config_.strike_limit = ev.at("strike_limit").get<std::size_t>();
        config_.triad_size = ev.at("triad_size").get<std::size_t>();
        pool_ = ev.at("pool").get<std::vector<std::string>>();
    } else if (type == "triad_presented") {
        const auto& t = ev.at("triad");
        Triad triad;
        triad.id = t.at("id").get<std::string>();
        triad.elements = t.at("elements").get<std::vector<std::string>>();
        triad.cycle = t.at("cycle").get<std::size_t>();
        cycle_ = triad.cycle;
        triads_.push_back(std::move(triad));
    } else if (type == "construct_recorded") {
        Construct c = construct_from_json(ev.at("construct"));
        for (auto& t : triads_) {
            if (t.id == c.triad_id) t.constructs.push_back(c.id);
        }
        constructs_.push_back(std::move(c));
    } else if (type == "triad_completed") {
        const auto tid = ev.at("triad").get<std::string>();
        if (triads_.empty() || triads_.back().id != tid) throw Error(Errc::conflict, "completed triad is not current");
        Triad& t = triads_.back();
        std::size_t novel = 0;
        for (const auto& cid : t.constructs) novel += find_construct(cid)->novelty ? 1 : 0;
        t.new_construct_count = novel;
        t.completed = true;
        strikes_ = novel == 0 ? strikes_ + 1 : 0;
        if (strikes_ >= config_.strike_limit) {
            state_ = SessionState::finished;
            finish_reason_ = FinishReason::strike_limit;
        }
        if (ev.at("strikes").get<std::size_t>() != strikes_) throw Error(Errc::conflict, "strike count mismatch in log");
    } else if (type == "element_added") {
        Element e = element_from_json(ev.at("element"));
        pool_.push_back(e.id);
        added_.push_back(std::move(e));
    } else if (type == "terminated") {
        state_ = SessionState::finished;
        finish_reason_ = FinishReason::interviewer;
        termination_note_ = ev.at("reason").get<std::string>();
    } else {
        throw Error(Errc::malformed_payload, "unknown event type '" + type + "'");
    }
}

const Json* Session::previous(const std::optional<std::string>& request_id, std::string_view type) const {
    if (!request_id) return nullptr;
    for (const auto& ev : events_) {
        if (ev.value("request_id", "") != *request_id) continue;
        if (ev.at("type").get<std::string>() != type) {
            throw Error(Errc::conflict, "request id '" + *request_id + "' was used for a different operation");
        }
        return &ev;
    }
    return nullptr;
}

void Session::require_active() const {
    if (state_ == SessionState::finished) throw Error(Errc::session_finished, "session " + id_ + " is finished");
}

const Triad* Session::current_triad() const {
    if (triads_.empty() || triads_.back().completed) return nullptr;
    return &triads_.back();
}

std::optional<Triad> Session::next_triad() {
    if (state_ == SessionState::finished) return std::nullopt;
    if (const Triad* t = current_triad()) return *t;

    const auto combos = combinations(pool_.size(), config_.triad_size);
    if (combos.empty()) throw Error(Errc::precondition_failed, "element pool smaller than the triad size");
    auto key_of = [&](const std::vector<std::size_t>& c) {
        std::vector<std::string> k;
        for (std::size_t i : c) k.push_back(pool_[i]);
        std::sort(k.begin(), k.end());
        return k;
    };
    std::set<std::vector<std::string>> seen;
    for (const auto& t : triads_) {
        if (t.cycle != cycle_) continue;
        auto k = t.elements;
        std::sort(k.begin(), k.end());
        seen.insert(std::move(k));
    }
    std::vector<const std::vector<std::size_t>*> fresh;
    for (const auto& c : combos) {
        if (!seen.count(key_of(c))) fresh.push_back(&c);
    }
    std::size_t cycle = cycle_;
    if (fresh.empty()) {
        ++cycle;
        for (const auto& c : combos) fresh.push_back(&c);
    }
    std::mt19937_64 rng(mix_seed(seed_, triads_.size()));
    const auto& pick = *fresh[std::uniform_int_distribution<std::size_t>(0, fresh.size() - 1)(rng)];
    Json elements = Json::array();
    for (std::size_t i : pick) elements.push_back(pool_[i]);
    emit({{"type", "triad_presented"},
          {"triad", {{"id", "t" + std::to_string(triads_.size() + 1)}, {"elements", elements}, {"cycle", cycle}}}},
         std::nullopt);
    return triads_.back();
}

const Construct* Session::find_construct(std::string_view id) const {
    for (const auto& c : constructs_) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

std::vector<std::string> Session::ladder_chain(std::string_view id) const {
    std::vector<std::string> chain;
    const Construct* c = find_construct(id);
    if (!c) throw Error(Errc::not_found, "unknown construct " + std::string(id));
    while (c) {
        chain.push_back(c->id);
        c = c->ladder_parent ? find_construct(*c->ladder_parent) : nullptr;
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

Construct Session::record_construct(std::string_view triad_id, const ConstructInput& in,
                                    std::optional<std::string> request_id) {
    if (const Json* ev = previous(request_id, "construct_recorded")) return construct_from_json(ev->at("construct"));
    require_active();
    const Triad* cur = current_triad();
    if (!cur || cur->id != triad_id) {
        throw Error(Errc::precondition_failed, "triad " + std::string(triad_id) + " is not the current triad");
    }
    const std::string a = normalize_pole(in.pole_a), b = normalize_pole(in.pole_b);
    if (a.empty() || b.empty()) throw Error(Errc::invalid_construct, "both poles must be non-empty");
    if (a == b) throw Error(Errc::invalid_construct, "the two poles must differ");
    if (in.ladder_parent && !find_construct(*in.ladder_parent)) {
        throw Error(Errc::not_found, "unknown ladder parent " + *in.ladder_parent);
    }
    if (in.duplicate_of && !find_construct(*in.duplicate_of)) {
        throw Error(Errc::not_found, "unknown construct " + *in.duplicate_of);
    }
    const std::string key = pair_key(in.pole_a, in.pole_b);
    bool novel = !in.duplicate_of.has_value();
    for (const auto& c : constructs_) novel = novel && pair_key(c.pole_a, c.pole_b) != key;

    // Stored trimmed, with the participant's casing.
    auto trim = [](std::string_view s) {
        std::size_t lo = 0, hi = s.size();
        while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
        while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
        return std::string(s.substr(lo, hi - lo));
    };
    Construct c;
    c.id = id_ + "/c" + std::to_string(constructs_.size() + 1);
    c.session_id = id_;
    c.pole_a = trim(in.pole_a);
    c.pole_b = trim(in.pole_b);
    c.triad_id = std::string(triad_id);
    c.ladder_parent = in.ladder_parent;
    c.duplicate_of = in.duplicate_of;
    c.novelty = novel;
    emit({{"type", "construct_recorded"}, {"construct", to_json(c)}}, request_id);
    return c;
}

TriadOutcome Session::complete_triad(std::optional<std::string> request_id) {
    auto outcome_of = [](const Json& ev) {
        TriadOutcome o;
        o.triad_id = ev.at("triad").get<std::string>();
        o.new_construct_count = ev.at("new_construct_count").get<std::size_t>();
        o.strikes = ev.at("strikes").get<std::size_t>();
        o.state = state_from_string(ev.at("state").get<std::string>());
        return o;
    };
    if (const Json* ev = previous(request_id, "triad_completed")) return outcome_of(*ev);
    require_active();
    const Triad* cur = current_triad();
    if (!cur) throw Error(Errc::precondition_failed, "no current triad to complete");
    std::size_t novel = 0;
    for (const auto& cid : cur->constructs) novel += find_construct(cid)->novelty ? 1 : 0;
    const std::size_t strikes = novel == 0 ? strikes_ + 1 : 0;
    const bool finishes = strikes >= config_.strike_limit;
    const auto ev = emit({{"type", "triad_completed"},
                          {"triad", cur->id},
                          {"new_construct_count", novel},
                          {"strikes", strikes},
                          {"state", finishes ? "finished" : "active"}},
                         request_id);
    return outcome_of(ev);
}

std::string Session::add_participant_element(Element e, std::optional<std::string> request_id) {
    if (const Json* ev = previous(request_id, "element_added")) return ev->at("element").at("id").get<std::string>();
    require_active();
    check_payload(e);
    e.id = element_content_id(e);
    if (e.origin == ElementOrigin::generated) e.origin = ElementOrigin::participant_drawn;
    if (std::find(pool_.begin(), pool_.end(), e.id) != pool_.end()) {
        throw Error(Errc::conflict, "element " + e.id + " is already in the pool");
    }
    emit({{"type", "element_added"}, {"element", to_json(e)}}, request_id);
    return e.id;
}

void Session::terminate(std::string reason, std::optional<std::string> request_id) {
    if (previous(request_id, "terminated")) return;
    require_active();
    emit({{"type", "terminated"}, {"reason", std::move(reason)}}, request_id);
}

// --- serialization --------------------------------------------------------------

Json to_json(const Element& e) {
    Json j{{"id", e.id}, {"origin", to_string(e.origin)}, {"label", e.label}};
    if (e.drawing) j["drawing"] = *e.drawing;
    if (e.image) j["image"] = *e.image;
    return j;
}

Element element_from_json(const Json& j) {
    Element e;
    try {
        e.origin = element_origin_from_string(j.value("origin", "generated"));
        e.label = j.value("label", "");
        if (j.contains("drawing")) e.drawing = drawing_from_json(j.at("drawing"));
        if (j.contains("image")) e.image = j.at("image").get<std::string>();
    } catch (const Json::exception& ex) {
        throw Error(Errc::malformed_payload, std::string("element: ") + ex.what());
    }
    check_payload(e);
    e.id = element_content_id(e);
    if (j.contains("id") && j.at("id").get<std::string>() != e.id) {
        throw Error(Errc::malformed_payload, "element id does not match its content");
    }
    return e;
}

Json to_json(const Study& s) {
    Json elements = Json::array();
    for (const auto& e : s.elements) elements.push_back(to_json(e));
    return Json{{"id", s.id},
                {"name", s.name},
                {"config", {{"strike_limit", s.config.strike_limit}, {"triad_size", s.config.triad_size}}},
                {"elements", elements}};
}

Study study_from_json(const Json& j) {
    try {
        std::vector<Element> elements;
        for (const auto& e : j.at("elements")) elements.push_back(element_from_json(e));
        StudyConfig c;
        if (j.contains("config")) {
            c.strike_limit = j.at("config").value("strike_limit", c.strike_limit);
            c.triad_size = j.at("config").value("triad_size", c.triad_size);
        }
        Study s = create_study(j.value("name", ""), std::move(elements), c);
        if (j.contains("id") && j.at("id").get<std::string>() != s.id) {
            throw Error(Errc::malformed_payload, "study id does not match its content");
        }
        return s;
    } catch (const Json::exception& ex) {
        throw Error(Errc::malformed_payload, std::string("study: ") + ex.what());
    }
}

Json to_json(const Construct& c) {
    return Json{{"id", c.id},
                {"session", c.session_id},
                {"pole_a", c.pole_a},
                {"pole_b", c.pole_b},
                {"triad", c.triad_id},
                {"ladder_parent", opt_json(c.ladder_parent)},
                {"duplicate_of", opt_json(c.duplicate_of)},
                {"novelty", c.novelty}};
}

Construct construct_from_json(const Json& j) {
    Construct c;
    c.id = j.at("id").get<std::string>();
    c.session_id = j.at("session").get<std::string>();
    c.pole_a = j.at("pole_a").get<std::string>();
    c.pole_b = j.at("pole_b").get<std::string>();
    c.triad_id = j.at("triad").get<std::string>();
    c.ladder_parent = opt_string(j, "ladder_parent");
    c.duplicate_of = opt_string(j, "duplicate_of");
    c.novelty = j.at("novelty").get<bool>();
    return c;
}

Json to_json(const Triad& t) {
    return Json{{"id", t.id},
                {"elements", t.elements},
                {"cycle", t.cycle},
                {"constructs", t.constructs},
                {"new_construct_count", t.new_construct_count},
                {"completed", t.completed}};
}

Json session_export(const Session& s) {
    Json triads = Json::array(), constructs = Json::array(), added = Json::array();
    for (const auto& t : s.triads_) triads.push_back(to_json(t));
    for (const auto& c : s.constructs_) {
        Json j = to_json(c);
        j["ladder_depth"] = s.ladder_chain(c.id).size();
        constructs.push_back(std::move(j));
    }
    for (const auto& e : s.added_) added.push_back(to_json(e));
    return Json{{"session", s.id_},
                {"study", s.study_id_},
                {"participant", s.participant_},
                {"seed", s.seed_},
                {"state", to_string(s.state_)},
                {"finish_reason", to_string(s.finish_reason_)},
                {"termination_note", s.termination_note_},
                {"strikes", s.strikes_},
                {"strike_limit", s.config_.strike_limit},
                {"triad_size", s.config_.triad_size},
                {"pool", s.pool_},
                {"triads", triads},
                {"constructs", constructs},
                {"participant_elements", added}};
}

std::string session_export_text(const Session& s) { return session_export(s).dump(); }

std::string SessionRecord::id() const { return data.at("session").get<std::string>(); }
std::string SessionRecord::study_id() const { return data.at("study").get<std::string>(); }
std::string SessionRecord::participant() const { return data.at("participant").get<std::string>(); }

std::vector<Construct> SessionRecord::constructs() const {
    std::vector<Construct> out;
    for (const auto& c : data.at("constructs")) out.push_back(construct_from_json(c));
    return out;
}

SessionRecord import_session(const Json& exported) {
    static const char* kFields[] = {"session", "study",  "participant", "seed",   "state",
                                    "finish_reason", "strikes", "triads", "constructs", "participant_elements"};
    if (!exported.is_object()) throw Error(Errc::malformed_payload, "session export must be an object");
    for (const char* f : kFields) {
        if (!exported.contains(f)) throw Error(Errc::malformed_payload, std::string("session export lacks '") + f + "'");
    }
    try {
        SessionRecord r{exported};
        r.constructs();  // shape check
        for (const auto& e : exported.at("participant_elements")) element_from_json(e);
        state_from_string(exported.at("state").get<std::string>());
        return r;
    } catch (const Json::exception& ex) {
        throw Error(Errc::malformed_payload, std::string("session export: ") + ex.what());
    }
}

std::string export_text(const SessionRecord& r) { return r.data.dump(); }

// --- participant surface ----------------------------------------------------------

std::optional<TriadPresentation> ParticipantView::current_triad() {
    auto t = s_.next_triad();
    if (!t) return std::nullopt;
    return TriadPresentation{t->id, t->elements};
}

std::string ParticipantView::submit_construct(std::string_view triad_id, std::string pole_a, std::string pole_b,
                                              std::optional<std::string> ladder_parent,
                                              std::optional<std::string> request_id) {
    ConstructInput in{std::move(pole_a), std::move(pole_b), std::move(ladder_parent), std::nullopt};
    return s_.record_construct(triad_id, in, std::move(request_id)).id;
}

bool ParticipantView::finish_triad(std::optional<std::string> request_id) {
    return s_.complete_triad(std::move(request_id)).state == SessionState::finished;
}

std::string ParticipantView::draw_element(const Drawing& d, std::string label, std::optional<std::string> request_id) {
    Element e;
    e.origin = ElementOrigin::participant_drawn;
    e.label = std::move(label);
    e.drawing = d;
    return s_.add_participant_element(std::move(e), std::move(request_id));
}

}  // namespace gaw::rgt
