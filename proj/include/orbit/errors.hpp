#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orbit {

enum class ErrorCode {
  NonFinite,
  ConvergenceFailure,
  NotHermitian,
  NotPSD,
  ShapeMismatch,
  FieldMismatch,
  InvalidRank,
  DimensionHypothesis,
  AmbientMismatch,
  OutOfRange,
  EmptyDatabase,
  FeatureMapMismatch,
  UnknownId,
  ConfigInvalid,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace orbit
