#pragma once

// Repertory-grid interview engine.
//
// A Session is a state machine driven by events. Every mutating call
// validates, emits one event and applies it; replay() applies a stored log
// to a fresh session, so a replayed session is identical by construction.
// Event log lines are JSON objects with a "type" field:
//   session_started, triad_presented, construct_recorded, triad_completed,
//   element_added, terminated

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaw/json_io.hpp"
#include "gaw/model.hpp"

namespace gaw::rgt {

enum class ElementOrigin { generated, participant_drawn, placeholder };

std::string_view to_string(ElementOrigin o);
ElementOrigin element_origin_from_string(std::string_view s);

/// One stimulus. The payload is either a Drawing or an opaque image
/// reference (SVG text, file name or URL); ids are content hashes of it.
struct Element {
    std::string id;
    ElementOrigin origin = ElementOrigin::generated;
    std::string label;
    std::optional<Drawing> drawing;
    std::optional<std::string> image;
};

Element drawing_element(const Drawing& d, ElementOrigin origin = ElementOrigin::generated, std::string label = {});
Element image_element(std::string image, ElementOrigin origin = ElementOrigin::generated, std::string label = {});

struct StudyConfig {
    std::size_t strike_limit = 3;
    std::size_t triad_size = 3;
};

struct Study {
    std::string id;
    std::string name;
    std::vector<Element> elements;
    StudyConfig config;

    const Element* find(std::string_view element_id) const;
};

/// Throws invalid_argument for too few elements, duplicate ids or a bad
/// config, malformed_payload for an invalid drawing payload. The study id is
/// a content hash of name, config and element ids.
Study create_study(std::string name, std::vector<Element> elements, StudyConfig config = {});

enum class SessionState { active, finished };
enum class FinishReason { none, strike_limit, interviewer };

std::string_view to_string(SessionState s);
std::string_view to_string(FinishReason r);

struct Triad {
    std::string id;
    std::vector<std::string> elements;  // pool order
    std::size_t cycle = 0;              // bumps each time all combinations were shown
    std::vector<std::string> constructs;
    std::size_t new_construct_count = 0;
    bool completed = false;
};

struct Construct {
    std::string id;
    std::string session_id;
    std::string pole_a;
    std::string pole_b;
    std::string triad_id;
    std::optional<std::string> ladder_parent;
    std::optional<std::string> duplicate_of;  // interviewer synonym judgment
    bool novelty = false;
};

/// Case-folded, trimmed pole text.
std::string normalize_pole(std::string_view pole);

struct ConstructInput {
    std::string pole_a;
    std::string pole_b;
    std::optional<std::string> ladder_parent;
    std::optional<std::string> duplicate_of;
};

/// Outcome of complete_triad.
struct TriadOutcome {
    std::string triad_id;
    std::size_t new_construct_count = 0;
    std::size_t strikes = 0;
    SessionState state = SessionState::active;
};

class Session {
public:
    /// Starts a session on `study`. The id is derived from study, participant
    /// and seed.
    static Session start(const Study& study, std::string participant, std::uint64_t seed);
    /// Rebuilds a session from its event log.
    static Session replay(const Study& study, const std::vector<Json>& events);
    static std::string make_id(std::string_view study_id, std::string_view participant, std::uint64_t seed);

    const std::string& id() const { return id_; }
    const std::string& study_id() const { return study_id_; }
    const std::string& participant() const { return participant_; }
    std::uint64_t seed() const { return seed_; }
    SessionState state() const { return state_; }
    FinishReason finish_reason() const { return finish_reason_; }
    std::size_t strikes() const { return strikes_; }
    const StudyConfig& config() const { return config_; }
    const std::vector<Triad>& triads() const { return triads_; }
    const std::vector<Construct>& constructs() const { return constructs_; }
    const std::vector<Element>& participant_elements() const { return added_; }
    /// Element ids eligible for triads: study elements, then added ones.
    const std::vector<std::string>& pool() const { return pool_; }
    const std::vector<Json>& events() const { return events_; }

    /// The uncompleted triad, if any.
    const Triad* current_triad() const;

    /// Returns the current triad, or draws a new one: uniform over
    /// combinations not yet shown in this cycle. Empty optional when the
    /// session is finished.
    std::optional<Triad> next_triad();

    Construct record_construct(std::string_view triad_id, const ConstructInput& in,
                               std::optional<std::string> request_id = {});
    TriadOutcome complete_triad(std::optional<std::string> request_id = {});
    std::string add_participant_element(Element e, std::optional<std::string> request_id = {});
    void terminate(std::string reason, std::optional<std::string> request_id = {});

    const Construct* find_construct(std::string_view id) const;
    /// Construct ids from the ladder root down to `id`.
    std::vector<std::string> ladder_chain(std::string_view id) const;

private:
    Session() = default;

    void apply(const Json& event);
    Json emit(Json event, const std::optional<std::string>& request_id);
    const Json* previous(const std::optional<std::string>& request_id, std::string_view type) const;
    void require_active() const;

    std::string id_;
    std::string study_id_;
    std::string participant_;
    std::uint64_t seed_ = 0;
    StudyConfig config_;
    SessionState state_ = SessionState::active;
    FinishReason finish_reason_ = FinishReason::none;
    std::string termination_note_;
    std::size_t strikes_ = 0;
    std::size_t cycle_ = 0;
    std::vector<std::string> pool_;
    std::vector<Triad> triads_;
    std::vector<Construct> constructs_;
    std::vector<Element> added_;
    std::vector<Json> events_;

    friend Json session_export(const Session& s);
};

/// Complete, ordered record: triads, constructs with triad and ladder
/// provenance, added elements, strike and termination record.
Json session_export(const Session& s);
std::string session_export_text(const Session& s);

/// Reconstructed view of an export (no event log). Exporting it again gives
/// the same bytes.
struct SessionRecord {
    Json data;

    std::string id() const;
    std::string study_id() const;
    std::string participant() const;
    std::vector<Construct> constructs() const;
};

SessionRecord import_session(const Json& exported);
std::string export_text(const SessionRecord& r);

Json to_json(const Element& e);
Element element_from_json(const Json& j);
Json to_json(const Study& s);
Study study_from_json(const Json& j);
Json to_json(const Construct& c);
Construct construct_from_json(const Json& j);
Json to_json(const Triad& t);

/// What a participant sees of a triad: its id and the element ids.
struct TriadPresentation {
    std::string id;
    std::vector<std::string> elements;
};

/// Participant-facing surface: presents triads and accepts input, but has no
/// way to read back constructs of the live session.
class ParticipantView {
public:
    explicit ParticipantView(Session& s) : s_(s) {}

    std::optional<TriadPresentation> current_triad();
    std::string submit_construct(std::string_view triad_id, std::string pole_a, std::string pole_b,
                                 std::optional<std::string> ladder_parent = {},
                                 std::optional<std::string> request_id = {});
    bool finish_triad(std::optional<std::string> request_id = {});
    std::string draw_element(const Drawing& d, std::string label, std::optional<std::string> request_id = {});
    bool finished() const { return s_.state() == SessionState::finished; }

private:
    Session& s_;
};

}  // namespace gaw::rgt
