#pragma once

// HTTP front end over the store, the interview engine and the analysis
// workbook. Bodies are JSON in the same text format the library uses.
//
// Errors come back as {"error": {"code": ..., "message": ..., "detail": ...}}
// with a code from api_error_codes().

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gaw/analysis.hpp"
#include "gaw/error.hpp"
#include "gaw/json_io.hpp"
#include "gaw/store.hpp"

namespace httplib {
class Server;
}

namespace gaw::service {

struct ApiError {
    std::string code;
    std::string message;
    Json detail;  // null when absent

    Json to_json() const;
};

/// The closed set of error codes.
const std::vector<std::string>& api_error_codes();
int http_status(Errc code);

struct Route {
    std::string method;
    std::string pattern;       // regex as registered with the server
    bool participant_safe;     // reachable from the participant view
};

/// Every route the service registers.
const std::vector<Route>& routes();
/// The participant-facing subset.
std::vector<Route> participant_routes();

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::filesystem::path data_dir = "gaw-data";
};

/// Data directory from GAW_DATA_DIR, else `fallback`.
std::filesystem::path data_dir_from_env(const std::filesystem::path& fallback = "gaw-data");

class Service {
public:
    /// Throws io_error when the data directory is not writable.
    explicit Service(std::filesystem::path data_dir);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and returns the bound port; throws io_error when the port is busy.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();
    /// Waits until the server accepts connections.
    void wait_until_ready();

    rgt::Store& store() { return *store_; }

    /// Workbook over every stored session, keyed by study name, with the
    /// saved tags and mappings.
    analysis::Workbook workbook();

private:
    void register_routes();
    void save_workbook(const analysis::Workbook& w);

    std::unique_ptr<rgt::Store> store_;
    std::unique_ptr<httplib::Server> server_;
    std::filesystem::path workbook_path_;
    std::mutex workbook_mutex_;
};

/// Convenience: construct, bind and listen until the process ends.
void serve(const ServiceConfig& config);

}  // namespace gaw::service
