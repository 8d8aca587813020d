#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace modlab {

enum class ErrorCode {
    // grid-core
    NonPowerOfTwo,
    NonPositiveDomain,
    GridMismatch,
    NotNormalized,
    // states
    EdgeMargin,
    ResolutionGuard,
    ZeroState,
    DisjointnessViolated,
    BadInterval,
    // evolve
    NonFiniteAmplitude,
    // observables
    InternalInconsistency,
    PeriodUnderResolved,
    DegreeCap,
    MatrixPathTooLarge,
    NonUniformSampling,
    OffLatticeL,
    NoPeaks,
    // heisenberg-matrix
    DimCap,
    NonDifferentiableV,
    // ab-scattering
    OutOfEnvelope,
    TruncationTooSmall,
    // lab
    UnknownExperiment,
    SchemaViolation,
    IoFailure,
    RegimeViolation,
    // generic precondition failure not covered above
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for errors caused by a malformed request (bad config, unknown name).
bool is_schema_error(ErrorCode code) noexcept;

/// True for errors raised by a numerical guard (cross-checks, resolution,
/// regime and truncation guards).
bool is_numerical_guard(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace modlab
