#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tracelab {

enum class ErrorCode {
  InvalidArgument,
  LengthGuard,
  InvalidK,
  IndexOutOfRange,
  ShapeMismatch,
  InvalidA,
  BoundViolation,
  CoefficientBound,
  InvalidL,
  SizeGuard,
  DomainMismatch,
  EmptyFamily,
  EmptyTraceSet,
  ParseError,
  Usage,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tracelab
