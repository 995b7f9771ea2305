#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wnv {

enum class ErrorCode {
    PositivityViolation,
    BoundViolation,
    BoundaryViolation,
    PeriodicityViolation,
    StabilityFailure,
    NonfiniteValue,
    NoConvergence,
    DegenerateMap,
    BracketFailure,
    NotConstantCoefficients,
    NoCriticalLength,
    MaxIterations,
    NonMonotoneIterate,
    PrerequisiteFailed,
    NotInBistableRegime,
    InconsistentOracle,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every engine failure is reported through this type; `code()` is the
/// machine-readable tag, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace wnv
