#include "hyperct/hypergamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hyperct/errors.hpp"

namespace hyperct {

namespace {

std::string fmt(Complex z) {
  return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

// expm1 for complex arguments, accurate near zero.
Complex expm1c(Complex w) {
  const double x = w.real();
  const double y = w.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

}  // namespace

QuasiPeriods::QuasiPeriods(Complex wplus, Complex wminus) : wplus_(wplus), wminus_(wminus) {
  if (!is_finite(wplus) || !is_finite(wminus)) {
    fail(ErrorKind::InvalidArgument, "quasi-periods must be finite");
  }
  if (!(wplus.real() > 0.0) || !(wminus.real() > 0.0)) {
    fail(ErrorKind::InvalidArgument,
         "quasi-periods need positive real parts, got w+=" + fmt(wplus) + " w-=" + fmt(wminus));
  }
}

Complex QuasiPeriods::q() const {
  const Complex value = std::exp(2.0 * kPi * kI * wplus_ / wminus_);
  if (!(std::abs(value) < 1.0)) fail(ErrorKind::ModularPointInvalid, "|q| >= 1 (w+/w- not in upper half-plane)");
  return value;
}

Complex QuasiPeriods::qtilde() const {
  const Complex value = std::exp(-2.0 * kPi * kI * wminus_ / wplus_);
  if (!(std::abs(value) < 1.0)) fail(ErrorKind::ModularPointInvalid, "|qtilde| >= 1 (w+/w- not in upper half-plane)");
  return value;
}

bool QuasiPeriods::in_Lambda(Complex z, double tol) const {
  const Complex ip = kI * wplus_;
  const Complex im = kI * wminus_;
  const int max_p = static_cast<int>(std::ceil((std::abs(z) + tol) / wplus_.real())) + 1;
  const int max_m = static_cast<int>(std::ceil((std::abs(z) + tol) / wminus_.real())) + 1;
  for (int a = 0; a <= max_p; ++a) {
    for (int b = 0; b <= max_m; ++b) {
      if (std::abs(z - static_cast<double>(a) * ip - static_cast<double>(b) * im) < tol) return true;
    }
  }
  return false;
}

QuadratureSpec gamma_default_spec() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-13;
  spec.abs_tol = 1e-13;
  spec.max_subdivisions = 20000;
  return spec;
}

double singular_distance(const QuasiPeriods& qp, Complex z) {
  const Complex base = kI * qp.omega();
  const Complex ip = kI * qp.wplus();
  const Complex im = kI * qp.wminus();
  double best = std::numeric_limits<double>::infinity();
  for (const Complex w : {z - base, -z - base}) {
    // Lattice points farther than |w| + best cannot win; real parts bound
    // the coefficients.
    const double reach = std::abs(w) + 1.0;
    const int max_p = static_cast<int>(reach / qp.wplus().real()) + 1;
    const int max_m = static_cast<int>(reach / qp.wminus().real()) + 1;
    for (int a = 0; a <= max_p; ++a) {
      for (int b = 0; b <= max_m; ++b) {
        best = std::min(best, std::abs(w - static_cast<double>(a) * ip - static_cast<double>(b) * im));
      }
    }
  }
  return best;
}

namespace {

// Coefficients of the even expansion of the G integrand
//   (sin(2yz) / (2 sinh(ay) sinh(by)) - z/(ab y)) / y
// in powers y^0, y^2, y^4, y^6.
std::array<Complex, 4> small_y_series(Complex a, Complex b, Complex z) {
  const Complex a2 = a * a, b2 = b * b, z2 = z * z;
  const Complex a4 = a2 * a2, b4 = b2 * b2, z4 = z2 * z2;
  const Complex a6 = a4 * a2, b6 = b4 * b2, z6 = z4 * z2;
  const Complex a8 = a4 * a4, b8 = b4 * b4, z8 = z4 * z4;
  const Complex pre = z / (a * b);
  std::array<Complex, 4> c;
  c[0] = -pre * (a2 + b2 + 4.0 * z2) / 6.0;
  c[1] = pre * (7.0 * a4 + 10.0 * a2 * b2 + 40.0 * a2 * z2 + 7.0 * b4 + 40.0 * b2 * z2 + 48.0 * z4) / 360.0;
  c[2] = -pre *
         (31.0 * a6 + 49.0 * a4 * b2 + 196.0 * a4 * z2 + 49.0 * a2 * b4 + 280.0 * a2 * b2 * z2 +
          336.0 * a2 * z4 + 31.0 * b6 + 196.0 * b4 * z2 + 336.0 * b2 * z4 + 192.0 * z6) /
         15120.0;
  c[3] = pre *
         (381.0 * a8 + 620.0 * a6 * b2 + 2480.0 * a6 * z2 + 686.0 * a4 * b4 + 3920.0 * a4 * b2 * z2 +
          4704.0 * a4 * z4 + 620.0 * a2 * b6 + 3920.0 * a2 * b4 * z2 + 6720.0 * a2 * b2 * z4 +
          3840.0 * a2 * z6 + 381.0 * b8 + 2480.0 * b6 * z2 + 4704.0 * b4 * z4 + 3840.0 * b2 * z6 +
          1280.0 * z8) /
         1814400.0;
  return c;
}

GammaValue make_value(Complex log_value, int shifts, double distance) {
  GammaValue g;
  g.log_value = log_value;
  g.value = std::exp(g.log_value);
  g.shifts_applied = shifts;
  g.nearest_singularity_distance = distance;
  return g;
}

Complex log_gamma_strip_integral(const QuasiPeriods& qp, Complex z, const QuadratureSpec& spec) {
  const Complex a = qp.wplus();
  const Complex b = qp.wminus();
  const Complex ab = a * b;
  const double im_z = std::abs(z.imag());
  const double decay = (a + b).real() - 2.0 * im_z;

  HalflineEnds ends;
  const double scale = std::max({1.0, std::abs(z), std::abs(a), std::abs(b)});
  ends.split = std::min(1e-2, 0.05 / scale);
  ends.even_series = small_y_series(a, b, z);
  ends.tail = [z, ab](double upper) { return -z / (ab * upper); };

  const Complex sum_ab = a + b;
  auto integrand = [=](double y) -> Complex {
    // 2 sinh(ay) sinh(by) = e^{(a+b)y} (1 - e^{-2ay}) (1 - e^{-2by}) / 2
    const Complex p = expm1c(-2.0 * a * y) * expm1c(-2.0 * b * y);
    Complex head;
    if (2.0 * y * im_z < 40.0) {
      head = 2.0 * std::sin(2.0 * y * z) * std::exp(-sum_ab * y) / (y * p);
    } else {
      const Complex ep = std::exp(2.0 * kI * y * z - sum_ab * y);
      const Complex em = std::exp(-2.0 * kI * y * z - sum_ab * y);
      head = (ep - em) / (kI * y * p);
    }
    return head - z / (ab * y * y);
  };
  const IntegralResult r = integrate_halfline(integrand, spec, decay, ends);
  return kI * r.value;
}

}  // namespace

GammaValue gamma_strip(const QuasiPeriods& qp, Complex z, const QuadratureSpec& spec) {
  if (!is_finite(z)) fail(ErrorKind::InvalidArgument, "z must be finite");
  const double half_width = 0.5 * (qp.wplus() + qp.wminus()).real();
  if (!(std::abs(z.imag()) < half_width - 1e-9)) {
    fail(ErrorKind::OutOfStrip, "|Im z| = " + std::to_string(std::abs(z.imag())) +
                                    " not below strip half-width " + std::to_string(half_width));
  }
  const double distance = singular_distance(qp, z);
  if (z == Complex{0.0, 0.0}) return make_value({0.0, 0.0}, 0, distance);
  return make_value(log_gamma_strip_integral(qp, z, spec), 0, distance);
}

namespace {

// Distance of x to the zeros i*w+*(n + 1/2) of cosh(pi x / w+).
double cosh_zero_distance(Complex x, Complex wplus) {
  const Complex t = x / (kI * wplus) - 0.5;
  const double n = std::round(t.real());
  return std::abs(x - kI * wplus * (n + 0.5));
}

}  // namespace

GammaValue gamma(const QuasiPeriods& qp, Complex z, const QuadratureSpec& spec) {
  if (!is_finite(z)) fail(ErrorKind::InvalidArgument, "z must be finite");
  const double distance = singular_distance(qp, z);
  if (distance < kSingularityGuard) {
    fail(ErrorKind::NearSingularity, "z=" + fmt(z) + " within " + std::to_string(distance) +
                                         " of the zero/pole locus of G");
  }
  const Complex wp = qp.wplus();
  const Complex wm = qp.wminus();
  // Central band: the integrand then decays at least like exp(-Re(w+) y / 2).
  const double band = 0.5 * wm.real() + 0.25 * wp.real();
  if (std::abs(z.imag()) <= band) {
    GammaValue g = gamma_strip(qp, z, spec);
    g.nearest_singularity_distance = distance;
    return g;
  }
  const long steps = std::lround(z.imag() / wm.real());
  if (std::labs(steps) > kMaxGammaShifts) {
    fail(ErrorKind::NonConvergence, "continuation of G needs " + std::to_string(std::labs(steps)) +
                                        " functional-equation steps (limit " +
                                        std::to_string(kMaxGammaShifts) + ")");
  }
  Complex log_factors{0.0, 0.0};
  Complex w = z;
  const Complex shift = kI * wm;
  for (long j = 0; j < std::labs(steps); ++j) {
    // Downward: G(w) = 2cosh(pi (w - i w-/2)/w+) G(w - i w-).
    // Upward:   G(w) = G(w + i w-) / 2cosh(pi (w + i w-/2)/w+).
    const Complex arg = steps > 0 ? w - 0.5 * shift : w + 0.5 * shift;
    if (cosh_zero_distance(arg, wp) < kSingularityGuard) {
      fail(ErrorKind::NearSingularity, "functional-equation factor vanishes near " + fmt(arg));
    }
    const Complex lc = log_two_cosh(kPi * arg / wp);
    if (steps > 0) {
      log_factors += lc;
      w -= shift;
    } else {
      log_factors -= lc;
      w += shift;
    }
  }
  const GammaValue inner = gamma_strip(qp, w, spec);
  return make_value(inner.log_value + log_factors, static_cast<int>(std::labs(steps)), distance);
}

GammaValue gamma_alpha(const QuasiPeriods& qp, double u, Complex z, const QuadratureSpec& spec) {
  if (!(u > 0.0)) fail(ErrorKind::InvalidArgument, "root-length factor u must be positive");
  return gamma(qp.with_minus_scaled(u), z, spec);
}

Complex log_qpoch(Complex z, Complex q, double eps) {
  if (!(std::abs(q) <= 1.0 - 1e-6)) {
    fail(ErrorKind::ModulusTooClose, "|q| = " + std::to_string(std::abs(q)) + " too close to 1");
  }
  Complex total{0.0, 0.0};
  Complex term = z;
  long guard = 0;
  while (std::abs(term) >= eps) {
    const Complex factor = 1.0 - term;
    if (factor == Complex{0.0, 0.0}) return {-std::numeric_limits<double>::infinity(), 0.0};
    total += std::log(factor);
    term *= q;
    if (++guard > 100000000) fail(ErrorKind::NonConvergence, "q-Pochhammer product did not truncate");
    if (term == Complex{0.0, 0.0}) break;
  }
  // Remaining factors: log prod (1 - q^j z) ~ -sum q^j z = -term / (1 - q).
  total += -term / (1.0 - q);
  return total;
}

Complex qpoch(Complex z, Complex q, double eps) {
  if (!(std::abs(q) <= 1.0 - 1e-6)) {
    fail(ErrorKind::ModulusTooClose, "|q| = " + std::to_string(std::abs(q)) + " too close to 1");
  }
  Complex product{1.0, 0.0};
  Complex term = z;
  long guard = 0;
  while (std::abs(term) >= eps) {
    product *= 1.0 - term;
    term *= q;
    if (++guard > 100000000) fail(ErrorKind::NonConvergence, "q-Pochhammer product did not truncate");
    if (term == Complex{0.0, 0.0}) break;
  }
  return product * std::exp(-term / (1.0 - q));
}

Complex shintani_product(const QuasiPeriods& qp, Complex z, double eps) {
  const Complex ratio = qp.wplus() / qp.wminus();
  if (!(ratio.imag() > 0.0)) {
    fail(ErrorKind::ModularPointInvalid, "w+/w- = " + fmt(ratio) + " is not in the open upper half-plane");
  }
  const Complex wp = qp.wplus();
  const Complex wm = qp.wminus();
  const Complex w = qp.omega();
  const Complex num = log_qpoch(std::exp(-2.0 * kPi * (z - kI * w) / wm), qp.q(), eps);
  const Complex den = log_qpoch(std::exp(-2.0 * kPi * (z + kI * w) / wp), qp.qtilde(), eps);
  const Complex prefactor = -kPi * kI / 24.0 * (ratio + 1.0 / ratio) - kPi * kI * z * z / (2.0 * wp * wm);
  return std::exp(num - den + prefactor);
}

namespace {

constexpr int kLineNodes = 17;
constexpr double kLineCheck[] = {-0.83, -0.41, 0.07, 0.52, 0.91};

double lobatto(int j) { return -std::cos(kPi * j / (kLineNodes - 1)); }

}  // namespace

GammaLine::GammaLine(const QuasiPeriods& qp, Complex offset, double half_width, double tolerance,
                     const QuadratureSpec& spec)
    : qp_(qp), offset_(offset), half_width_(half_width), tolerance_(tolerance), spec_(spec) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    fail(ErrorKind::InvalidArgument, "GammaLine half-width must be positive and finite");
  }
  if (!(tolerance > 0.0)) fail(ErrorKind::InvalidArgument, "GammaLine tolerance must be positive");
  const int initial = std::max(1, static_cast<int>(std::ceil(half_width)));
  const double width = half_width / initial;
  for (int p = -initial; p < initial; ++p) build(p * width, (p + 1) * width, 0);
}

Complex GammaLine::direct(double x) const { return gamma(qp_, x + offset_, spec_).log_value; }

GammaLine::Panel GammaLine::make_panel(double lo, double hi) {
  Panel panel{lo, hi, std::vector<Complex>(kLineNodes)};
  const double mid = 0.5 * (lo + hi);
  const double rad = 0.5 * (hi - lo);
  for (int j = 0; j < kLineNodes; ++j) {
    Complex v = direct(mid + rad * lobatto(j));
    ++evaluations_;
    if (j > 0) {
      // Keep the logarithm continuous from node to node.
      Complex predicted = panel.nodes[j - 1];
      if (j > 1) {
        const double h1 = lobatto(j) - lobatto(j - 1);
        const double h0 = lobatto(j - 1) - lobatto(j - 2);
        predicted += (panel.nodes[j - 1] - panel.nodes[j - 2]) * (h1 / h0);
      }
      const double turns = std::round((predicted.imag() - v.imag()) / (2.0 * kPi));
      v += Complex{0.0, 2.0 * kPi * turns};
    }
    panel.nodes[j] = v;
  }
  return panel;
}

namespace {

Complex interpolate(const std::vector<Complex>& nodes, double t) {
  Complex num{0.0, 0.0};
  double den = 0.0;
  for (int j = 0; j < kLineNodes; ++j) {
    const double d = t - lobatto(j);
    if (d == 0.0) return nodes[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == kLineNodes - 1) w *= 0.5;
    num += nodes[j] * (w / d);
    den += w / d;
  }
  return num / den;
}

}  // namespace

void GammaLine::build(double lo, double hi, int depth) {
  Panel panel = make_panel(lo, hi);
  const double mid = 0.5 * (lo + hi);
  const double rad = 0.5 * (hi - lo);
  double worst = 0.0;
  for (double t : kLineCheck) {
    const Complex exact = direct(mid + rad * t);
    ++evaluations_;
    // Direct values carry an absolute log error proportional to |log G|.
    const double err = std::abs(expm1c(interpolate(panel.nodes, t) - exact));
    worst = std::max(worst, err / std::max(1.0, std::abs(exact)));
  }
  if (worst <= tolerance_) {
    panels_.push_back(std::move(panel));
    return;
  }
  if (depth >= 40 || hi - lo < 1e-6) {
    fail(ErrorKind::NonConvergence, "tabulation of G along a line did not reach tolerance near x=" +
                                        std::to_string(mid));
  }
  build(lo, mid, depth + 1);
  build(mid, hi, depth + 1);
}

Complex GammaLine::log_value(double x) const {
  if (!(std::abs(x) <= half_width_) || panels_.empty()) return direct(x);
  auto it = std::upper_bound(panels_.begin(), panels_.end(), x,
                             [](double v, const Panel& p) { return v < p.lo; });
  if (it != panels_.begin()) --it;
  const double mid = 0.5 * (it->lo + it->hi);
  const double rad = 0.5 * (it->hi - it->lo);
  return interpolate(it->nodes, std::clamp((x - mid) / rad, -1.0, 1.0));
}

}  // namespace hyperct
