#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace magdim {

enum class ErrorKind {
  DegenerateInput,
  InvalidScale,
  NumericallySingular,
  EmptyCurve,
  InsufficientPoints,
  NonPositiveMagnitude,
  DegenerateSlope,
  InvalidAlpha,
  MalformedIdx,
  DivergedLoss,
  InsufficientRecords,
  InvalidInputs,
  OutOfRange,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace magdim
