#include "wnv/error.hpp"

namespace wnv {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::PositivityViolation: return "PositivityViolation";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::BoundaryViolation: return "BoundaryViolation";
    case ErrorCode::PeriodicityViolation: return "PeriodicityViolation";
    case ErrorCode::StabilityFailure: return "StabilityFailure";
    case ErrorCode::NonfiniteValue: return "NonfiniteValue";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateMap: return "DegenerateMap";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::NotConstantCoefficients: return "NotConstantCoefficients";
    case ErrorCode::NoCriticalLength: return "NoCriticalLength";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::NonMonotoneIterate: return "NonMonotoneIterate";
    case ErrorCode::PrerequisiteFailed: return "PrerequisiteFailed";
    case ErrorCode::NotInBistableRegime: return "NotInBistableRegime";
    case ErrorCode::InconsistentOracle: return "InconsistentOracle";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

} // namespace wnv
