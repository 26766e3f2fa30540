#include "tracelab/error.hpp"

namespace tracelab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LengthGuard: return "LengthGuard";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidA: return "InvalidA";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::CoefficientBound: return "CoefficientBound";
    case ErrorCode::InvalidL: return "InvalidL";
    case ErrorCode::SizeGuard: return "SizeGuard";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::EmptyTraceSet: return "EmptyTraceSet";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace tracelab
