#include "orbit/errors.hpp"

namespace orbit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::DimensionHypothesis: return "DimensionHypothesis";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyDatabase: return "EmptyDatabase";
    case ErrorCode::FeatureMapMismatch: return "FeatureMapMismatch";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace orbit
