#include "unirigid/errors.hpp"

namespace unirigid {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::InvalidRotation: return "InvalidRotation";
        case ErrorKind::AngleNearPi: return "AngleNearPi";
        case ErrorKind::GimbalLock: return "GimbalLock";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::FrameNotAtCoM: return "FrameNotAtCoM";
        case ErrorKind::RankDeficientConstraint: return "RankDeficientConstraint";
        case ErrorKind::NonFiniteState: return "NonFiniteState";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

}  // namespace unirigid
