#pragma once

// File-backed persistence for studies and sessions.
//
//   <root>/studies/<study id>.json      study with element payloads
//   <root>/sessions/<session id>.jsonl  append-only event log, one event per line

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gaw/rgt.hpp"

namespace gaw::rgt {

class Store {
public:
    /// Creates the directory layout; throws io_error when it is not writable.
    explicit Store(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    /// Idempotent for identical content.
    Study put_study(const Study& s);
    std::optional<Study> find_study(const std::string& id);
    Study study(const std::string& id);  // throws not_found
    std::vector<Study> studies();

    /// Throws conflict when the session already exists.
    std::string start_session(const std::string& study_id, const std::string& participant, std::uint64_t seed);
    std::vector<std::string> session_ids(const std::string& study_id);
    bool has_session(const std::string& id);

    /// Runs `f` with the session locked (single writer per session) and then
    /// appends any new events to its log, even when `f` throws.
    template <typename F>
    auto with_session(const std::string& id, F&& f) {
        Entry& e = entry(id);
        std::lock_guard lock(e.mutex);
        struct Flush {
            Store& store;
            Entry& entry;
            ~Flush() { store.flush(entry); }
        } flush{*this, e};
        return f(*e.session);
    }

private:
    struct Entry {
        std::mutex mutex;
        std::unique_ptr<Session> session;
        std::size_t persisted = 0;
        std::filesystem::path log;
    };

    Entry& entry(const std::string& id);
    void flush(Entry& e);
    std::filesystem::path study_path(const std::string& id) const;
    std::filesystem::path session_path(const std::string& id) const;

    std::filesystem::path root_;
    std::mutex mutex_;  // guards the maps below and study files
    std::map<std::string, Study> studies_;
    std::map<std::string, std::unique_ptr<Entry>> sessions_;
};

/// Reads a session event log file (one JSON object per line).
std::vector<Json> read_event_log(const std::filesystem::path& path);

}  // namespace gaw::rgt
