#include "nvdrift/error.hpp"

namespace nvdrift {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSeries: return "InvalidSeries";
    case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::DegenerateX: return "DegenerateX";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InsufficientRows: return "InsufficientRows";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NoOscillation: return "NoOscillation";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NonPositiveOffset: return "NonPositiveOffset";
    case ErrorCode::PeakAtEdge: return "PeakAtEdge";
    case ErrorCode::ZeroRate: return "ZeroRate";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace nvdrift
