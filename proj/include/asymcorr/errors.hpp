#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asymcorr {

enum class ErrorCode {
  InvalidInput,
  InvalidMultiplicity,
  NoSplitting,
  CrepantInput,
  NonIntegerOffset,
  NonInvertible,
  UnknownGrade,
  TruncationTooSmall,
  LambdaLimitUndefined,
  NonIntegerAgeSign,
  FactorMismatch,
  VariableMismatch,
  NotInLaplaceNormalForm,
  SingularityTooClose,
  PrecisionExhausted,
  RegionViolation,
  TailNotConvergent,
  SingularWronskian,
  ResidualTooLarge,
  ResonantLambda,
  NotBig,
  ObstructedFactorization,
  MissingStage,
  ConfigError,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace asymcorr
