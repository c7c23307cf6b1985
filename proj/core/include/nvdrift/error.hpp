#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nvdrift {

/// Failure categories raised by the library. Each maps to a stable name that
/// the command-line tool prints in its machine-readable error line.
enum class ErrorCode {
  InvalidArgument,
  InvalidSeries,
  DuplicateTimestamp,
  NonFiniteValue,
  OutOfRange,
  TooFewSamples,
  NoOverlap,
  DegenerateRange,
  EmptyResult,
  DegenerateX,
  LengthMismatch,
  InsufficientRows,
  MissingColumn,
  NoOscillation,
  NonConvergence,
  NonPositiveOffset,
  PeakAtEdge,
  ZeroRate,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nvdrift
