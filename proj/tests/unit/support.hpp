#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hyperct/complex.hpp"

namespace hyperct::testing {

inline double rel_diff(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline Complex polar_unit(double turns) { return std::polar(1.0, 2.0 * kPi * turns); }

// Seeded uniform source shared by the property tests.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  Complex complex_box(double re_lo, double re_hi, double im_lo, double im_hi) {
    return {uniform(re_lo, re_hi), uniform(im_lo, im_hi)};
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hyperct::testing
