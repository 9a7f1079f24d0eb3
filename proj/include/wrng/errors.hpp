#pragma once

#include <stdexcept>
#include <string>

namespace wrng {

/// Raised when the tracked pool sum of squares disagrees grossly with the
/// recomputed one (typically the caller has overwritten the generator state).
class corrupted_state_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class state_error_kind {
    bad_magic,
    unsupported_version,
    truncated,
    field_range,
};

/// Raised by load_state for byte sequences that do not describe a valid state.
class malformed_state_error : public std::runtime_error {
public:
    malformed_state_error(state_error_kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    state_error_kind kind() const noexcept { return kind_; }

private:
    state_error_kind kind_;
};

}  // namespace wrng
