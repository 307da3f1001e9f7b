#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pg {

enum class Errc {
    invalid_argument,
    empty_text,
    dimension_mismatch,
    backend_unavailable,
    parse_error,
    io_error,
    fingerprint_mismatch,
    no_analyzable_text,
    payload_too_large,
    model_missing,
};

const char* to_string(Errc code);

/// Library-wide exception. `index()` is set when the failure is tied to one
/// element of a batch or one line of an input file.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message,
          std::optional<std::size_t> index = std::nullopt)
        : std::runtime_error(message), code_(code), index_(index) {}

    Errc code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    Errc code_;
    std::optional<std::size_t> index_;
};

}  // namespace pg
