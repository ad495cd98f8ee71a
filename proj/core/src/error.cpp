#include "nyopsim/error.hpp"

namespace nyopsim {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidCalibration: return "InvalidCalibration";
    case ErrorKind::QuantityExceedsIntercept: return "QuantityExceedsIntercept";
    case ErrorKind::DegenerateCurves: return "DegenerateCurves";
    case ErrorKind::RoundOutOfRange: return "RoundOutOfRange";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::UnknownLink: return "UnknownLink";
    case ErrorKind::InvalidMessage: return "InvalidMessage";
    case ErrorKind::LateMessage: return "LateMessage";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::DegenerateMean: return "DegenerateMean";
    case ErrorKind::InsufficientReplications: return "InsufficientReplications";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace nyopsim
