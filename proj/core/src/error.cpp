#include "modlab/error.hpp"

namespace modlab {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPowerOfTwo: return "NonPowerOfTwo";
        case ErrorCode::NonPositiveDomain: return "NonPositiveDomain";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::EdgeMargin: return "EdgeMargin";
        case ErrorCode::ResolutionGuard: return "ResolutionGuard";
        case ErrorCode::ZeroState: return "ZeroState";
        case ErrorCode::DisjointnessViolated: return "DisjointnessViolated";
        case ErrorCode::BadInterval: return "BadInterval";
        case ErrorCode::NonFiniteAmplitude: return "NonFiniteAmplitude";
        case ErrorCode::InternalInconsistency: return "InternalInconsistency";
        case ErrorCode::PeriodUnderResolved: return "PeriodUnderResolved";
        case ErrorCode::DegreeCap: return "DegreeCap";
        case ErrorCode::MatrixPathTooLarge: return "MatrixPathTooLarge";
        case ErrorCode::NonUniformSampling: return "NonUniformSampling";
        case ErrorCode::OffLatticeL: return "OffLatticeL";
        case ErrorCode::NoPeaks: return "NoPeaks";
        case ErrorCode::DimCap: return "DimCap";
        case ErrorCode::NonDifferentiableV: return "NonDifferentiableV";
        case ErrorCode::OutOfEnvelope: return "OutOfEnvelope";
        case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
        case ErrorCode::UnknownExperiment: return "UnknownExperiment";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::RegimeViolation: return "RegimeViolation";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_schema_error(ErrorCode code) noexcept {
    return code == ErrorCode::SchemaViolation || code == ErrorCode::UnknownExperiment;
}

bool is_numerical_guard(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonFiniteAmplitude:
        case ErrorCode::InternalInconsistency:
        case ErrorCode::PeriodUnderResolved:
        case ErrorCode::ResolutionGuard:
        case ErrorCode::EdgeMargin:
        case ErrorCode::DisjointnessViolated:
        case ErrorCode::TruncationTooSmall:
        case ErrorCode::RegimeViolation:
        case ErrorCode::OutOfEnvelope:
        case ErrorCode::NoPeaks:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace modlab
