#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace hyperct {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// log(2 cosh x), evaluated without overflow for large |Re x|. Principal
// branch of the log applied to the reduced factor.
inline Complex log_two_cosh(Complex x) {
  const Complex s = x.real() >= 0.0 ? x : -x;
  return s + std::log(1.0 + std::exp(-2.0 * s));
}

// log(2 sinh x) for Re x >= 0 up to sign bookkeeping of the caller.
inline Complex log_two_sinh(Complex x) {
  if (x.real() >= 0.0) return x + std::log(1.0 - std::exp(-2.0 * x));
  return -x + std::log(std::exp(2.0 * x) - 1.0);
}

}  // namespace hyperct
