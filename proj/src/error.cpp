#include "bvpair/error.hpp"

namespace bvpair {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TolNotMet: return "TOL_NOT_MET";
    case ErrorCode::NoCertificate: return "NO_CERTIFICATE";
    case ErrorCode::TRange: return "T_RANGE";
    case ErrorCode::InvalidCantorOverlap: return "INVALID_CANTOR_OVERLAP";
    case ErrorCode::LocatorMiss: return "LOCATOR_MISS";
    case ErrorCode::SelectionMismatch: return "SELECTION_MISMATCH";
    case ErrorCode::JumpsTooClose: return "JUMPS_TOO_CLOSE";
    case ErrorCode::SampleOutside: return "SAMPLE_OUTSIDE";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace bvpair
