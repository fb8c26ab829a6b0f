#include "netcascade/error.hpp"

namespace netcascade {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidBlock: return "InvalidBlock";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularInteraction: return "SingularInteraction";
    case ErrorCode::UnknownPortSet: return "UnknownPortSet";
    case ErrorCode::InvalidReference: return "InvalidReference";
    case ErrorCode::DeltaLikeSingularity: return "DeltaLikeSingularity";
    case ErrorCode::PortSetMismatch: return "PortSetMismatch";
    case ErrorCode::InvalidScheme: return "InvalidScheme";
    case ErrorCode::InvalidReduction: return "InvalidReduction";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::PortOrderMismatch: return "PortOrderMismatch";
    case ErrorCode::SingularUpdate: return "SingularUpdate";
    case ErrorCode::InvalidUpdate: return "InvalidUpdate";
    case ErrorCode::ResonantBond: return "ResonantBond";
    case ErrorCode::ResonantGraph: return "ResonantGraph";
    case ErrorCode::InvalidGluing: return "InvalidGluing";
    case ErrorCode::InvalidSubset: return "InvalidSubset";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix:
    case ErrorCode::SingularInteraction:
    case ErrorCode::DeltaLikeSingularity:
    case ErrorCode::SingularUpdate:
    case ErrorCode::ResonantBond:
    case ErrorCode::ResonantGraph:
    case ErrorCode::GenerationFailed:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what, std::optional<double> condition)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      condition_(condition) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace netcascade
