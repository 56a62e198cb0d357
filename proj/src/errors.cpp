#include "asymcorr/errors.hpp"

namespace asymcorr {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidMultiplicity: return "InvalidMultiplicity";
    case ErrorCode::NoSplitting: return "NoSplitting";
    case ErrorCode::CrepantInput: return "CrepantInput";
    case ErrorCode::NonIntegerOffset: return "NonIntegerOffset";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::UnknownGrade: return "UnknownGrade";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::LambdaLimitUndefined: return "LambdaLimitUndefined";
    case ErrorCode::NonIntegerAgeSign: return "NonIntegerAgeSign";
    case ErrorCode::FactorMismatch: return "FactorMismatch";
    case ErrorCode::VariableMismatch: return "VariableMismatch";
    case ErrorCode::NotInLaplaceNormalForm: return "NotInLaplaceNormalForm";
    case ErrorCode::SingularityTooClose: return "SingularityTooClose";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::RegionViolation: return "RegionViolation";
    case ErrorCode::TailNotConvergent: return "TailNotConvergent";
    case ErrorCode::SingularWronskian: return "SingularWronskian";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::ResonantLambda: return "ResonantLambda";
    case ErrorCode::NotBig: return "NotBig";
    case ErrorCode::ObstructedFactorization: return "ObstructedFactorization";
    case ErrorCode::MissingStage: return "MissingStage";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace asymcorr
