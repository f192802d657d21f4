#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace unirigid {

enum class ErrorKind {
    InvalidArgument,
    InvalidRotation,
    AngleNearPi,
    GimbalLock,
    IllConditioned,
    NotPositiveDefinite,
    FrameNotAtCoM,
    RankDeficientConstraint,
    NonFiniteState,
    ParseError,
    ValidationError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` discriminates the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace unirigid
