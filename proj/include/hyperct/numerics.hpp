#pragma once

// Quadrature and summation kernels shared by the special-function and
// verification layers. Every routine here is a pure function of its inputs.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hyperct/complex.hpp"

namespace hyperct {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 100000;
  double truncation_safety = 1.0;
  long mc_samples = 100000;

  // Throws InvalidArgument when a field is outside its documented range.
  void validate() const;

  bool operator==(const QuadratureSpec&) const = default;
};

struct IntegralResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

using RealFunction1 = std::function<Complex(double)>;
using BoxFunction = std::function<Complex(std::span<const double>)>;

// Behaviour of a half-line integrand at the two ends of (0, inf).
struct HalflineEnds {
  // When set, the integral over (0, split] is taken from the even power
  // series sum_k coeffs[k] * y^(2k) instead of evaluating f there.
  double split = 0.0;
  std::optional<std::array<Complex, 4>> even_series;
  // When set, tail(Y) must return the integral of f over [Y, inf) of the
  // algebraically decaying part; the remainder of f must decay like
  // exp(-decay_rate * y).
  std::function<Complex(double)> tail;
};

// Integral of f over (0, inf). Adaptive 15-point Gauss-Kronrod with
// bisection on [split, Y]; Y is chosen so that exp(-decay_rate * Y) stays
// below abs_tol / 10 (scaled by truncation_safety).
IntegralResult integrate_halfline(const RealFunction1& f, const QuadratureSpec& spec,
                                  double decay_rate, const HalflineEnds& ends = {});

// Adaptive Gauss-Kronrod on a finite interval.
IntegralResult integrate_interval(const RealFunction1& f, double a, double b,
                                  const QuadratureSpec& spec);

// Adaptive tensor Gauss-Legendre cubature over a box, 1 <= n <= 3.
IntegralResult integrate_box_nd(const BoxFunction& f, std::span<const double> lower,
                                std::span<const double> upper, const QuadratureSpec& spec);

// Plain Monte-Carlo over a finite box; error_estimate is one standard error.
IntegralResult monte_carlo_box(const BoxFunction& f, std::span<const double> lower,
                               std::span<const double> upper, const QuadratureSpec& spec,
                               std::uint64_t seed);

// M^-n * sum_{j in {0..M-1}^n} f(j / M).
Complex trapezoid_periodic_nd(const BoxFunction& f, int dimension, int grid_per_axis);

struct LatticeSumResult {
  Complex value{0.0, 0.0};
  int radius = 0;
  double last_shell = 0.0;
  long terms = 0;
};

using LatticeFunction = std::function<Complex(const Eigen::VectorXd&)>;

// Sum of f over sum_j m_j * generators[j], grown shell by shell in the max
// norm of m until a whole shell contributes less than tail_tol.
LatticeSumResult lattice_sum(const LatticeFunction& f, std::span<const Eigen::VectorXd> generators,
                             double tail_tol, int max_radius = 400, int min_radius = 2);

// Fixed-radius variant: all coefficient vectors with max |m_j| <= radius.
Complex lattice_sum_fixed(const LatticeFunction& f, std::span<const Eigen::VectorXd> generators,
                          int radius);

}  // namespace hyperct
