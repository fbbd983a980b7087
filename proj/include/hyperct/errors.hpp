#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperct {

enum class ErrorKind {
  NonConvergence,
  InvalidDecay,
  DimensionTooLarge,
  InvalidBox,
  OutOfStrip,
  NearSingularity,
  ModulusTooClose,
  ModularPointInvalid,
  UnsupportedFamily,
  DimensionMismatch,
  ZeroVector,
  NotARoot,
  NotInS,
  NotInSPrime,
  NotInSBC,
  IntegralityViolation,
  UnsupportedCombination,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Kinds raised by bad parameters rather than by numerical trouble.
bool is_input_error(ErrorKind kind);

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace hyperct
