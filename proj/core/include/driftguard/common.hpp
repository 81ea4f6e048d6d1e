#pragma once

#include <stdexcept>
#include <string>

namespace driftguard {

// Failure categories surfaced by the library. Each code maps onto a
// documented precondition or validation rule of the operation that throws it.
enum class ErrorCode {
  kMissingColumn,
  kNonNumericCell,
  kEmptyFile,
  kEmptyTrainingSet,
  kClassTooSmall,
  kTooManyDropped,
  kInvalidArchitecture,
  kDimensionMismatch,
  kEmptyBatch,
  kZeroVector,
  kUnknownLabel,
  kEmptyClass,
  kNonPositiveVariance,
  kNoPrototypes,
  kUnknownClass,
  kTooFewClasses,
  kLengthMismatch,
  kEmptyInput,
  kSingleClass,
  kProtocolError,
  kConfigError,
  kIoError,
};

constexpr const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kNonNumericCell: return "NonNumericCell";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kClassTooSmall: return "ClassTooSmall";
    case ErrorCode::kTooManyDropped: return "TooManyDropped";
    case ErrorCode::kInvalidArchitecture: return "InvalidArchitecture";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kNonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::kNoPrototypes: return "NoPrototypes";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kTooFewClasses: return "TooFewClasses";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace driftguard
