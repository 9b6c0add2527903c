#include "magdim/errors.hpp"

namespace magdim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InvalidScale: return "InvalidScale";
    case ErrorKind::NumericallySingular: return "NumericallySingular";
    case ErrorKind::EmptyCurve: return "EmptyCurve";
    case ErrorKind::InsufficientPoints: return "InsufficientPoints";
    case ErrorKind::NonPositiveMagnitude: return "NonPositiveMagnitude";
    case ErrorKind::DegenerateSlope: return "DegenerateSlope";
    case ErrorKind::InvalidAlpha: return "InvalidAlpha";
    case ErrorKind::MalformedIdx: return "MalformedIdx";
    case ErrorKind::DivergedLoss: return "DivergedLoss";
    case ErrorKind::InsufficientRecords: return "InsufficientRecords";
    case ErrorKind::InvalidInputs: return "InvalidInputs";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace magdim
