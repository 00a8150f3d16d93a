#include "gaw/store.hpp"

#include <algorithm>
#include <fstream>

#include "gaw/error.hpp"

namespace gaw::rgt {

namespace fs = std::filesystem;

Store::Store(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_ / "studies", ec);
    if (!ec) fs::create_directories(root_ / "sessions", ec);
    if (ec) throw Error(Errc::io_error, "cannot create data directory " + root_.string() + ": " + ec.message());
    const auto probe = root_ / ".write-probe";
    {
        std::ofstream out(probe);
        if (!out) throw Error(Errc::io_error, "data directory " + root_.string() + " is not writable");
    }
    fs::remove(probe, ec);
}

fs::path Store::study_path(const std::string& id) const { return root_ / "studies" / (id + ".json"); }
fs::path Store::session_path(const std::string& id) const { return root_ / "sessions" / (id + ".jsonl"); }

Study Store::put_study(const Study& s) {
    std::lock_guard lock(mutex_);
    const auto path = study_path(s.id);
    if (!fs::exists(path)) write_text_file(path, to_json(s).dump() + "\n");
    studies_.insert_or_assign(s.id, s);
    return s;
}

std::optional<Study> Store::find_study(const std::string& id) {
    std::lock_guard lock(mutex_);
    if (auto it = studies_.find(id); it != studies_.end()) return it->second;
    // Ids are hex digests; anything else cannot name a file of ours.
    if (id.empty() || id.find_first_not_of("0123456789abcdef") != std::string::npos) return std::nullopt;
    const auto path = study_path(id);
    if (!fs::exists(path)) return std::nullopt;
    Study s = study_from_json(read_json_file(path));
    studies_.insert_or_assign(id, s);
    return s;
}

Study Store::study(const std::string& id) {
    if (auto s = find_study(id)) return *s;
    throw Error(Errc::not_found, "unknown study " + id);
}

std::vector<Study> Store::studies() {
    std::vector<std::string> ids;
    for (const auto& f : fs::directory_iterator(root_ / "studies")) {
        if (f.path().extension() == ".json") ids.push_back(f.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    std::vector<Study> out;
    for (const auto& id : ids) out.push_back(study(id));
    return out;
}

bool Store::has_session(const std::string& id) {
    std::lock_guard lock(mutex_);
    if (sessions_.count(id)) return true;
    if (id.empty() || id.find_first_not_of("0123456789abcdef") != std::string::npos) return false;
    return fs::exists(session_path(id));
}

std::string Store::start_session(const std::string& study_id, const std::string& participant, std::uint64_t seed) {
    const Study s = study(study_id);
    const auto id = Session::make_id(s.id, participant, seed);
    std::lock_guard lock(mutex_);
    if (sessions_.count(id) || fs::exists(session_path(id))) {
        throw Error(Errc::conflict, "session " + id + " already exists");
    }
    auto e = std::make_unique<Entry>();
    e->session = std::make_unique<Session>(Session::start(s, participant, seed));
    e->log = session_path(id);
    flush(*e);
    sessions_.emplace(id, std::move(e));
    return id;
}

std::vector<std::string> Store::session_ids(const std::string& study_id) {
    std::vector<std::string> out;
    for (const auto& f : fs::directory_iterator(root_ / "sessions")) {
        if (f.path().extension() != ".jsonl") continue;
        std::ifstream in(f.path());
        std::string first;
        if (!std::getline(in, first)) continue;
        const auto ev = Json::parse(first, nullptr, false);
        if (!ev.is_discarded() && ev.value("study", "") == study_id) out.push_back(f.path().stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

Store::Entry& Store::entry(const std::string& id) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = sessions_.find(id); it != sessions_.end()) return *it->second;
    }
    if (!has_session(id)) throw Error(Errc::not_found, "unknown session " + id);
    const auto path = session_path(id);
    auto events = read_event_log(path);
    if (events.empty()) throw Error(Errc::malformed_payload, "empty event log for session " + id);
    const Study s = study(events.front().at("study").get<std::string>());
    auto e = std::make_unique<Entry>();
    e->session = std::make_unique<Session>(Session::replay(s, events));
    e->persisted = events.size();
    e->log = path;
    std::lock_guard lock(mutex_);
    auto [it, inserted] = sessions_.emplace(id, std::move(e));
    return *it->second;
}

void Store::flush(Entry& e) {
    const auto& events = e.session->events();
    if (e.persisted == events.size()) return;
    std::ofstream out(e.log, std::ios::app);
    if (!out) throw Error(Errc::io_error, "cannot append to " + e.log.string());
    for (; e.persisted < events.size(); ++e.persisted) out << events[e.persisted].dump() << '\n';
    out.flush();
}

std::vector<Json> read_event_log(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
    std::vector<Json> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        auto j = Json::parse(line, nullptr, false);
        if (j.is_discarded()) throw Error(Errc::malformed_payload, path.string() + ":" + std::to_string(n) + ": bad JSON");
        out.push_back(std::move(j));
    }
    return out;
}

}  // namespace gaw::rgt
