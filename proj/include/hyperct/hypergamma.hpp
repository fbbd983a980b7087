#pragma once

#include <vector>

#include "hyperct/complex.hpp"
#include "hyperct/numerics.hpp"

namespace hyperct {

// Pair of quasi-periods (w+, w-) with positive real parts.
class QuasiPeriods {
 public:
  QuasiPeriods(Complex wplus, Complex wminus);

  Complex wplus() const { return wplus_; }
  Complex wminus() const { return wminus_; }
  Complex omega() const { return 0.5 * (wplus_ + wminus_); }

  // exp(2 pi i w+/w-) and exp(-2 pi i w-/w+); both throw
  // ModularPointInvalid unless the modulus is below one.
  Complex q() const;
  Complex qtilde() const;

  // Membership of z in Z>=0 * i w+ + Z>=0 * i w- up to tol.
  bool in_Lambda(Complex z, double tol) const;

  QuasiPeriods swapped() const { return {wminus_, wplus_}; }
  // (w+, u * w-), the quasi-periods of G_alpha.
  QuasiPeriods with_minus_scaled(double u) const { return {wplus_, u * wminus_}; }

 private:
  Complex wplus_;
  Complex wminus_;
};

struct GammaValue {
  Complex log_value{0.0, 0.0};
  Complex value{1.0, 0.0};
  int shifts_applied = 0;
  double nearest_singularity_distance = 0.0;
};

// Tolerances used when a caller does not pass its own: tight enough that
// G is accurate to ~1e-12 relative on its working range.
QuadratureSpec gamma_default_spec();

inline constexpr double kSingularityGuard = 1e-8;
inline constexpr int kMaxGammaShifts = 200;

// Distance from z to the zero locus i*omega + Lambda and the pole locus
// -(i*omega + Lambda).
double singular_distance(const QuasiPeriods& qp, Complex z);

// G from its integral representation; requires |Im z| < Re(w+ + w-)/2.
GammaValue gamma_strip(const QuasiPeriods& qp, Complex z,
                       const QuadratureSpec& spec = gamma_default_spec());

// Meromorphic continuation: z is moved into a central band of the strip
// with the w- functional equation, then gamma_strip is applied.
GammaValue gamma(const QuasiPeriods& qp, Complex z,
                 const QuadratureSpec& spec = gamma_default_spec());

// G(w+, u*w-; z) for the root-length factor u in {1, 1/2, 1/3}.
GammaValue gamma_alpha(const QuasiPeriods& qp, double u, Complex z,
                       const QuadratureSpec& spec = gamma_default_spec());

// x -> log G(qp; x + offset) for real x, tabulated on [-half_width,
// half_width] by piecewise Chebyshev interpolation. Panels are bisected
// until the interpolant matches direct evaluation at check points to
// `tolerance` times max(1, |log G|), the accuracy of the direct values; outside the table G is evaluated directly.
// The returned logarithm is continuous within a panel but may differ from
// gamma().log_value by a multiple of 2 pi i.
class GammaLine {
 public:
  GammaLine(const QuasiPeriods& qp, Complex offset, double half_width, double tolerance = 1e-12,
            const QuadratureSpec& spec = gamma_default_spec());

  Complex log_value(double x) const;
  Complex value(double x) const { return std::exp(log_value(x)); }
  std::size_t panel_count() const { return panels_.size(); }
  long direct_evaluations() const { return evaluations_; }

 private:
  struct Panel {
    double lo, hi;
    std::vector<Complex> nodes;  // values at Chebyshev-Lobatto points, lo to hi
  };

  Complex direct(double x) const;
  Panel make_panel(double lo, double hi);
  void build(double lo, double hi, int depth);

  QuasiPeriods qp_;
  Complex offset_;
  double half_width_;
  double tolerance_;
  QuadratureSpec spec_;
  std::vector<Panel> panels_;
  long evaluations_ = 0;
};

// (z; q)_inf truncated once |q^j z| < eps; the neglected tail is folded in
// through its first-order logarithm.
Complex qpoch(Complex z, Complex q, double eps = 1e-17);

// Sum of principal logarithms of the factors of (z; q)_inf; the real part is
// -inf when a factor vanishes.
Complex log_qpoch(Complex z, Complex q, double eps = 1e-17);

// Right-hand side of Shintani's product formula; requires w+/w- in the open
// upper half-plane.
Complex shintani_product(const QuasiPeriods& qp, Complex z, double eps = 1e-17);

}  // namespace hyperct
