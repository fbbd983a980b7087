#include <cmath>
#include <functional>

#include "doctest.h"
#include "hyperct/errors.hpp"
#include "hyperct/hypergamma.hpp"
#include "reference_values.hpp"
#include "support.hpp"

using namespace hyperct;
using hyperct::testing::polar_unit;
using hyperct::testing::rel_diff;
using hyperct::testing::Sampler;

namespace {

ErrorKind kind_of(const std::function<void()>& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

Complex G(const QuasiPeriods& qp, Complex z) { return gamma(qp, z).value; }

QuasiPeriods random_qp(Sampler& rng) {
  return {std::polar(rng.uniform(0.6, 1.8), rng.uniform(-1.0, 1.0)),
          std::polar(rng.uniform(0.6, 1.8), rng.uniform(-1.0, 1.0))};
}

// Runs check(qp, z) on `count` random admissible inputs, resampling z when
// the evaluation lands next to a zero or pole.
void for_random_inputs(std::uint64_t seed, int count, const std::function<void(const QuasiPeriods&, Complex)>& check) {
  Sampler rng(seed);
  int done = 0;
  int attempts = 0;
  while (done < count) {
    REQUIRE(++attempts < 10 * count);
    const QuasiPeriods qp = random_qp(rng);
    const Complex z = rng.complex_box(-1.5, 1.5, -1.2, 1.2);
    try {
      check(qp, z);
      ++done;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NearSingularity) throw;
    }
  }
}

}  // namespace

TEST_CASE("quasi-periods validate and expose the nomes") {
  CHECK(kind_of([] { QuasiPeriods(Complex(0.0, 1.0), 1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { QuasiPeriods(1.0, Complex(-0.1, 1.0)); }) == ErrorKind::InvalidArgument);
  const QuasiPeriods real(1.0, 1.0);
  CHECK(kind_of([&] { real.q(); }) == ErrorKind::ModularPointInvalid);
  CHECK(kind_of([&] { real.qtilde(); }) == ErrorKind::ModularPointInvalid);
  const QuasiPeriods skew(1.0, polar_unit(-1.0 / 12));
  CHECK(std::abs(skew.q()) < 1.0);
  CHECK(std::abs(skew.qtilde()) < 1.0);
  CHECK(skew.omega() == 0.5 * (skew.wplus() + skew.wminus()));
}

TEST_CASE("lattice membership predicate") {
  const QuasiPeriods qp(1.0, Complex(0.5, -0.5));
  CHECK(qp.in_Lambda(0.0, 1e-12));
  CHECK(qp.in_Lambda(kI * (2.0 * qp.wplus() + 3.0 * qp.wminus()), 1e-9));
  CHECK_FALSE(qp.in_Lambda(-kI * qp.wplus(), 1e-9));
  CHECK_FALSE(qp.in_Lambda(0.5 * kI * qp.wplus(), 1e-9));
}

TEST_CASE("strip evaluation: special values") {
  CHECK(std::abs(gamma_strip({1.0, 1.0}, 0.0).value - 1.0) < 1e-12);
  CHECK(std::abs(gamma_strip({1.0, 1.0}, Complex(0.0, 0.5)).value - std::sqrt(2.0)) < 1e-11);
  CHECK(std::abs(gamma_strip({2.0, 1.0}, Complex(0.0, -0.5)).value - std::sqrt(0.5)) < 1e-11);
  CHECK(gamma_strip({1.0, 1.0}, 0.3).shifts_applied == 0);
  CHECK(kind_of([] { gamma_strip({1.0, 1.0}, Complex(0.0, 1.2)); }) == ErrorKind::OutOfStrip);
}

TEST_CASE("gamma agrees with the independent reference values") {
  using namespace hyperct::reference;
  CHECK(rel_diff(G({1.0, 1.0}, {0.3, 0.2}), kGammaUnit_0p3_0p2) < 1e-10);
  CHECK(rel_diff(G({1.0, polar_unit(-1.0 / 12)}, {0.3, 0.1}), kGammaSkew_0p3_0p1) < 1e-10);
  CHECK(rel_diff(G({1.0, 2.0}, {0.0, 1.7}), kGammaOneTwo_1p7i) < 1e-10);
  CHECK(rel_diff(G({polar_unit(-0.125), polar_unit(-0.125)}, {0.4, -0.3}), kGammaCoLinear_0p4_m0p3) < 1e-10);
  CHECK(rel_diff(G({Complex(1.0, -0.2), Complex(0.7, 0.1)}, {2.5, 1.9}), kGammaFar_2p5_1p9) < 1e-10);
}

TEST_CASE("continuation matches one manual functional-equation step") {
  const QuasiPeriods qp(1.0, 2.0);
  const Complex z(0.0, 1.7);
  const GammaValue continued = gamma(qp, z);
  CHECK(continued.shifts_applied > 0);
  const Complex stepped = 2.0 * std::cosh(kPi * (z - kI)) * gamma_strip(qp, z - 2.0 * kI).value;
  CHECK(rel_diff(continued.value, stepped) < 1e-11);
  CHECK(std::abs(std::exp(continued.log_value) - continued.value) < 1e-15 * std::abs(continued.value));
}

TEST_CASE("in-strip gamma is gamma_strip") {
  const QuasiPeriods qp(Complex(1.0, -0.3), Complex(0.8, 0.2));
  const Complex z(0.4, 0.2);
  CHECK(gamma(qp, z).value == gamma_strip(qp, z).value);
  CHECK(gamma(qp, z).shifts_applied == 0);
}

TEST_CASE("gamma refuses the zero and pole loci") {
  const QuasiPeriods qp(1.0, Complex(0.9, -0.2));
  CHECK(kind_of([&] { gamma(qp, kI * qp.omega()); }) == ErrorKind::NearSingularity);
  CHECK(kind_of([&] { gamma(qp, -kI * qp.omega() - kI * qp.wminus()); }) == ErrorKind::NearSingularity);
  CHECK(singular_distance(qp, kI * qp.omega()) < 1e-12);
}

TEST_CASE("reflection equation on random inputs") {
  for_random_inputs(101, 100, [](const QuasiPeriods& qp, Complex z) {
    CHECK(std::abs(G(qp, z) * G(qp, -z) - 1.0) < 1e-10);
  });
}

TEST_CASE("functional equations on random inputs") {
  for_random_inputs(102, 100, [](const QuasiPeriods& qp, Complex z) {
    const Complex wp = qp.wplus(), wm = qp.wminus();
    const Complex plus = G(qp, z + 0.5 * kI * wp) / G(qp, z - 0.5 * kI * wp);
    CHECK(rel_diff(plus, 2.0 * std::cosh(kPi * z / wm)) < 1e-10);
    const Complex minus = G(qp, z + 0.5 * kI * wm) / G(qp, z - 0.5 * kI * wm);
    CHECK(rel_diff(minus, 2.0 * std::cosh(kPi * z / wp)) < 1e-10);
  });
}

TEST_CASE("product and duplication formulas on random inputs") {
  for_random_inputs(103, 100, [](const QuasiPeriods& qp, Complex z) {
    const Complex wp = qp.wplus(), wm = qp.wminus(), w = qp.omega();
    const Complex product = G(qp, z + kI * w) * G(qp, -z + kI * w);
    CHECK(rel_diff(product, 4.0 * std::sinh(kPi * z / wp) * std::sinh(kPi * z / wm)) < 1e-9);
    const Complex doubled = G(qp, 2.0 * z + kI * w);
    const Complex split = G(qp, z) * G(qp, z + 0.5 * kI * wp) * G(qp, z + 0.5 * kI * wm) * G(qp, z + kI * w);
    CHECK(rel_diff(doubled, split) < 1e-9);
  });
}

TEST_CASE("symmetry in the quasi-periods on random inputs") {
  for_random_inputs(104, 100, [](const QuasiPeriods& qp, Complex z) {
    CHECK(rel_diff(G(qp, z), G(qp.swapped(), z)) < 1e-10);
  });
}

TEST_CASE("special values on random quasi-periods") {
  Sampler rng(105);
  for (int i = 0; i < 100; ++i) {
    const QuasiPeriods qp = random_qp(rng);
    const Complex wp = qp.wplus(), wm = qp.wminus();
    CHECK(std::abs(G(qp, 0.0) - 1.0) < 1e-10);
    CHECK(std::abs(G(qp, 0.5 * kI * wp) - std::sqrt(2.0)) < 1e-10);
    CHECK(std::abs(G(qp, 0.5 * kI * wm) - std::sqrt(2.0)) < 1e-10);
    CHECK(std::abs(G(qp, 0.5 * kI * (wm - wp)) - std::sqrt(wm / wp)) < 1e-10);
  }
}

TEST_CASE("scaled quasi-period gamma") {
  const QuasiPeriods qp(1.0, 1.0);
  CHECK(std::abs(gamma_alpha(qp, 0.5, 0.0).value - 1.0) < 1e-12);
  CHECK(gamma_alpha(qp, 1.0, Complex(0.2, 0.1)).value == gamma(qp, Complex(0.2, 0.1)).value);
  Sampler rng(106);
  for (int i = 0; i < 10; ++i) {
    const QuasiPeriods random = random_qp(rng);
    const double u = i % 2 == 0 ? 0.5 : 1.0 / 3.0;
    const Complex z = rng.complex_box(-1.0, 1.0, -0.3, 0.3);
    const Complex direct = gamma_alpha(random, u, z).value;
    const Complex rescaled = gamma(QuasiPeriods(random.wminus(), random.wplus() / u), z / u).value;
    CHECK(rel_diff(direct, rescaled) < 1e-10);
  }
}

TEST_CASE("tabulated line matches direct evaluation") {
  const QuasiPeriods qp(polar_unit(-1.0 / 12), polar_unit(-1.0 / 6));
  const Complex offset = kI * qp.omega() * 0.7;
  const GammaLine line(qp, offset, 6.0, 1e-12);
  CHECK(line.panel_count() > 0);
  for (double x : {-5.9, -2.3, -0.01, 0.0, 0.77, 3.14, 5.5, 7.5}) {
    CHECK(rel_diff(line.value(x), gamma(qp, x + offset).value) < 1e-10);
  }
}

TEST_CASE("q-Pochhammer symbol") {
  CHECK(qpoch(0.0, Complex(0.3, 0.4)) == Complex(1.0));
  CHECK(std::abs(qpoch(Complex(0.2, -0.7), 0.0) - Complex(0.8, 0.7)) < 1e-15);
  CHECK(std::abs(qpoch(0.5, 0.5) - hyperct::reference::kQpochHalfHalf) < 1e-15);
  CHECK(std::abs(std::exp(log_qpoch(Complex(0.3, 0.1), Complex(0.2, 0.6))) - qpoch(Complex(0.3, 0.1), Complex(0.2, 0.6))) <
        1e-14);
  CHECK(kind_of([] { qpoch(0.5, 1.0 - 1e-7); }) == ErrorKind::ModulusTooClose);
}

TEST_CASE("Shintani product") {
  const QuasiPeriods qp(1.0, polar_unit(-1.0 / 12));
  CHECK(std::abs(shintani_product(qp, 0.0) - 1.0) < 1e-10);
  CHECK(rel_diff(shintani_product(qp, Complex(0.3, 0.1)), G(qp, Complex(0.3, 0.1))) < 1e-10);
  CHECK(rel_diff(shintani_product(qp, Complex(0.3, 0.1)), hyperct::reference::kGammaSkew_0p3_0p1) < 1e-10);
  CHECK(kind_of([] { shintani_product({1.0, 1.0}, 0.0); }) == ErrorKind::ModularPointInvalid);
}

TEST_CASE("Shintani product on random modular inputs") {
  Sampler rng(107);
  for (int i = 0; i < 100; ++i) {
    // w+/w- in the upper half-plane: arg w+ - arg w- in (0.2, 1.2).
    const double arg_minus = rng.uniform(-0.9, 0.0);
    const double arg_plus = arg_minus + rng.uniform(0.2, 1.2);
    const QuasiPeriods qp(std::polar(rng.uniform(0.7, 1.5), arg_plus),
                          std::polar(rng.uniform(0.7, 1.5), arg_minus));
    const double strip = 0.45 * (qp.wplus() + qp.wminus()).real();
    const Complex z = rng.complex_box(-1.5, 1.5, -strip, strip);
    CHECK(rel_diff(shintani_product(qp, z), G(qp, z)) < 1e-10);
  }
}
