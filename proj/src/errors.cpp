#include "hyperct/errors.hpp"

namespace hyperct {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::InvalidDecay: return "InvalidDecay";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::InvalidBox: return "InvalidBox";
    case ErrorKind::OutOfStrip: return "OutOfStrip";
    case ErrorKind::NearSingularity: return "NearSingularity";
    case ErrorKind::ModulusTooClose: return "ModulusTooClose";
    case ErrorKind::ModularPointInvalid: return "ModularPointInvalid";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotARoot: return "NotARoot";
    case ErrorKind::NotInS: return "NotInS";
    case ErrorKind::NotInSPrime: return "NotInSPrime";
    case ErrorKind::NotInSBC: return "NotInSBC";
    case ErrorKind::IntegralityViolation: return "IntegralityViolation";
    case ErrorKind::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence:
    case ErrorKind::NearSingularity:
    case ErrorKind::ModulusTooClose:
    case ErrorKind::InvalidDecay:
    case ErrorKind::IoError:
      return false;
    default:
      return true;
  }
}

}  // namespace hyperct
