#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nyopsim {

enum class ErrorKind {
  InvalidArgument,
  InvalidCalibration,
  QuantityExceedsIntercept,
  DegenerateCurves,
  RoundOutOfRange,
  EmptyWindow,
  InsufficientData,
  UnknownLink,
  InvalidMessage,
  LateMessage,
  ConfigInvalid,
  DegenerateVariance,
  DegenerateMean,
  InsufficientReplications,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one ErrorKind so callers can
/// branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nyopsim
