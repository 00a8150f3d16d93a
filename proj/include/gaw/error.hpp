#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaw {

/// Error kinds surfaced by the library. The service maps each one to a stable
/// API error code, so the set is closed.
enum class Errc {
    invalid_argument,
    malformed_payload,
    not_found,
    session_finished,
    invalid_construct,
    precondition_failed,
    infeasible,
    degenerate_geometry,
    conflict,
    io_error,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message) : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace gaw
