#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apsam {

/// Failure classes raised by the library. The CLI maps these onto exit codes.
enum class ErrorCode {
    InvalidArgument,
    SingularFrequency,
    PoleHit,
    RootFindingFailure,
    EmptyPlan,
    DegeneratePerturbations,
    SingularMeasurement,
    SingularInversion,
    InsufficientSamples,
    IllConditionedFit,
    NonAdjacentSequence,
    InconsistentCurve,
    FlatSlope,
    PassThroughCriticalPoint,
    DegenerateNumerator,
    ConsistencyViolation,
    ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace apsam
