#pragma once

#include <stdexcept>
#include <string>

namespace csbm {

enum class ErrorCode {
    // parameter validation
    NonStochasticPrior,
    AsymmetricP,
    ProbabilityOutOfRange,
    NonPositiveT,
    // sampling
    ResampleLimitExceeded,
    RevealProbabilityExceedsOne,
    VertexOutOfRange,
    LengthMismatch,
    // info geometry
    DimensionMismatch,
    NonPositiveEntry,
    NegativeEntry,
    CommunityOutOfRange,
    IndistinguishableCommunities,
    EmptyProfileSet,
    AnchorOutsideRange,
    // spectral
    NonPositiveY,
    NoValidEncoding,
    ExceptionSetViolation,
    EigensolverFailure,
    AlignmentMismatch,
    // recovery
    RegimeViolation,
    EqualEncodings,
    TooManyVectors,
    TooManyCommunities,
    SpectralConditionViolation,
    // harness / io
    IoFailure,
    FormatViolation,
    InvalidConfig,
};

const char* to_string(ErrorCode code);

/// All library failures are reported through this single exception type;
/// the code distinguishes the failure kind programmatically.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace csbm
