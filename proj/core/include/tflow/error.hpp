#pragma once

#include <stdexcept>
#include <string>

namespace tflow {

// Stable error codes surfaced through the CLI as machine-readable strings.
enum class ErrorCode {
  MalformedRow,
  NonFiniteValue,
  EmptyFile,
  BadMagic,
  VersionUnsupported,
  TruncatedPayload,
  IoFailure,
  NotASimplexRow,
  DimensionMismatch,
  DegenerateData,
  TooFewRows,
  GroupTooSmall,
  ClassTooSmall,
  ClusterTooSmall,
  MismatchedSampleCount,
  KTooLarge,
  CovarianceSingular,
  LengthMismatch,
  NumericalUnderflow,
  ShapeMismatch,
  AlphaOutOfRange,
  TooFewSubclasses,
  OddSuperclassCount,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tflow
