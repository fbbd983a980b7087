#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "hyperct/errors.hpp"
#include "hyperct/identities.hpp"
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

std::string message_of(const std::function<void()>& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Point in both S and S' shared by the closed-form tests.
const QuasiPeriods kModularQp(polar_unit(-1.0 / 12), polar_unit(-1.0 / 6));
const Multiplicity kModularK{Complex(-0.1, -0.5), Complex(-0.12, -0.4)};

ParameterPoint modular_point(Family f, int rank, IdentityCase c) {
  return ParameterPoint(kModularQp, build_shared(f, rank), c, kModularK);
}

struct Shape {
  Family family;
  int rank;
  IdentityCase c;
  const char* tag;
};

const std::vector<Shape> kShapes{
    {Family::A, 1, IdentityCase::I, "A1_i"},  {Family::A, 1, IdentityCase::II, "A1_ii"},
    {Family::A, 2, IdentityCase::I, "A2_i"},  {Family::A, 2, IdentityCase::II, "A2_ii"},
    {Family::B, 2, IdentityCase::I, "B2_i"},  {Family::B, 2, IdentityCase::II, "B2_ii"},
    {Family::C, 2, IdentityCase::I, "C2_i"},  {Family::C, 2, IdentityCase::II, "C2_ii"},
    {Family::G, 2, IdentityCase::I, "G2_i"},  {Family::G, 2, IdentityCase::II, "G2_ii"},
};

struct Frozen {
  Complex closed_form, n, ntilde, k;
};

Frozen frozen(const std::string& tag) {
  using namespace hyperct::reference;
#define HYPERCT_FROZEN(T) \
  if (tag == #T) return {kClosedForm_##T, kN_##T, kNtilde_##T, kK_##T};
  HYPERCT_FROZEN(A1_i)
  HYPERCT_FROZEN(A1_ii)
  HYPERCT_FROZEN(A2_i)
  HYPERCT_FROZEN(A2_ii)
  HYPERCT_FROZEN(B2_i)
  HYPERCT_FROZEN(B2_ii)
  HYPERCT_FROZEN(C2_i)
  HYPERCT_FROZEN(C2_ii)
  HYPERCT_FROZEN(G2_i)
  HYPERCT_FROZEN(G2_ii)
#undef HYPERCT_FROZEN
  FAIL("no frozen values for " << tag);
  return {};
}

Eigen::VectorXd random_real_vector(const RootSystemData& rs, Sampler& rng, double scale) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(rs.ambient_dim);
  for (int j = 0; j < rs.rank; ++j) v += rng.uniform(-scale, scale) * rs.fundamental_coweights[j];
  return v;
}

}  // namespace

TEST_CASE("validators accept the shared point and name violated conditions") {
  for (const auto& s : kShapes) {
    const ParameterPoint pp = modular_point(s.family, s.rank, s.c);
    CAPTURE(s.tag);
    CHECK(pp.in_S());
    CHECK(pp.in_S_prime());
  }
  const auto a1 = build_shared(Family::A, 1);
  const ParameterPoint positive_k(kModularQp, a1, IdentityCase::I, Multiplicity::uniform(1.0));
  CHECK_FALSE(positive_k.in_S());
  CHECK(positive_k.s_violation()->find("k ∉ ℂ₋") != std::string::npos);
  CHECK(message_of([&] { require_S(positive_k); }).find("k ∉ ℂ₋") != std::string::npos);
  CHECK(kind_of([&] { require_S(positive_k); }) == ErrorKind::NotInS);
  CHECK(kind_of([&] { require_S_prime(positive_k); }) == ErrorKind::NotInSPrime);

  const ParameterPoint real_product({1.0, 1.0}, a1, IdentityCase::I, Multiplicity::uniform(Complex(-1.0, -1.0)));
  CHECK(real_product.s_violation()->find("ω₊ω₋ ∉ ℍ₋") != std::string::npos);
  // Im(w+ w-) = 0 exactly at the boundary.
  const ParameterPoint boundary({Complex(1.0, 1.0), Complex(1.0, -1.0)}, a1, IdentityCase::I,
                                Multiplicity::uniform(Complex(-1.0, -1.0)));
  CHECK_FALSE(boundary.in_S());
  // Re w+ = 0 never reaches the validators.
  CHECK(kind_of([] { QuasiPeriods(Complex(0.0, -1.0), 1.0); }) == ErrorKind::InvalidArgument);
  // Pure predicates: repeated calls agree.
  CHECK(positive_k.s_violation() == positive_k.s_violation());
}

TEST_CASE("integrand equals its sinh form on random real points") {
  const QuasiPeriods colinear(polar_unit(-0.125), polar_unit(-0.125));
  const Multiplicity k{Complex(-0.3, -0.6), Complex(-0.5, -0.4)};
  Sampler rng(201);
  for (const auto& s : kShapes) {
    for (const auto& [qp, mult] : {std::pair{kModularQp, kModularK}, std::pair{colinear, k}}) {
      const ParameterPoint pp(qp, build_shared(s.family, s.rank), s.c, mult);
      REQUIRE(pp.in_S());
      CAPTURE(s.tag);
      for (int i = 0; i < 50; ++i) {
        const Eigen::VectorXcd v = random_real_vector(pp.rs(), rng, 1.5).cast<Complex>();
        CHECK(rel_diff(integrand_I(pp, v), integrand_I_alt(pp, v)) < 1e-9);
      }
    }
  }
}

TEST_CASE("integrand special cases") {
  const auto a1 = build_shared(Family::A, 1);
  const ParameterPoint pp(kModularQp, a1, IdentityCase::I, kModularK);
  const Eigen::VectorXcd v = (0.37 * a1->fundamental_coweights[0]).cast<Complex>();
  CHECK(rel_diff(integrand_I(pp, v), integrand_I_alt(pp, v)) < 1e-10);
  CHECK(std::abs(integrand_I_alt(pp, Eigen::VectorXcd::Zero(2))) == 0.0);

  const ParameterPoint trivial(kModularQp, build_shared(Family::B, 2), IdentityCase::II, Multiplicity::uniform(0.0));
  const Eigen::VectorXcd w = Eigen::Vector2d(0.3, -0.8).cast<Complex>();
  CHECK(std::abs(integrand_I(trivial, w) - 1.0) < 1e-12);
  CHECK(std::abs(integrand_I_alt(trivial, w) - 1.0) < 1e-10);
}

TEST_CASE("integrand is Weyl invariant on real points") {
  Sampler rng(202);
  for (const auto& s : kShapes) {
    const ParameterPoint pp = modular_point(s.family, s.rank, s.c);
    const Eigen::VectorXd v = random_real_vector(pp.rs(), rng, 1.0);
    const Complex base = integrand_I(pp, v.cast<Complex>());
    for (const auto& image : weyl_orbit(pp.rs(), v)) {
      CHECK(rel_diff(integrand_I(pp, image.cast<Complex>()), base) < 1e-10);
    }
  }
}

TEST_CASE("tabulated integrand matches direct evaluation") {
  const ParameterPoint pp = modular_point(Family::B, 2, IdentityCase::II);
  const TabulatedIntegrand table(pp, 6.0);
  Sampler rng(203);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd v = random_real_vector(pp.rs(), rng, 2.0);
    CHECK(rel_diff(table(v), integrand_I_alt(pp, v.cast<Complex>())) < 1e-9);
  }
}

TEST_CASE("closed forms agree with the independent reference values") {
  for (const auto& s : kShapes) {
    const ParameterPoint pp = modular_point(s.family, s.rank, s.c);
    const Frozen ref = frozen(s.tag);
    CAPTURE(s.tag);
    CHECK(rel_diff(rhs_CMalternative(pp), ref.closed_form) < 1e-10);
    CHECK(rel_diff(macdonald_N(pp), ref.n) < 1e-12);
    CHECK(rel_diff(macdonald_Ntilde(pp), ref.ntilde) < 1e-12);
    CHECK(rel_diff(constant_K(pp), ref.k) < 1e-12);
  }
  const ParameterPoint colinear({polar_unit(-0.125), polar_unit(-0.125)}, build_shared(Family::A, 1), IdentityCase::I,
                                Multiplicity::uniform(Complex(-1.0, -1.0)));
  CHECK(rel_diff(rhs_CMalternative(colinear), hyperct::reference::kA1CoLinearClosedForm) < 1e-10);
}

TEST_CASE("closed-form chain (i w-)^n K N Ntilde = #W rhs") {
  for (const auto& s : kShapes) {
    const ParameterPoint pp = modular_point(s.family, s.rank, s.c);
    CAPTURE(s.tag);
    const Complex chain = std::pow(kI * kModularQp.wminus(), s.rank) * constant_K(pp) * macdonald_N(pp) *
                          macdonald_Ntilde(pp);
    CHECK(rel_diff(chain, static_cast<double>(pp.rs().weyl_order) * rhs_CMalternative(pp)) < 1e-8);
  }
}

TEST_CASE("the two closed forms of the hyperbolic integral agree") {
  for (const auto& s : kShapes) {
    const ParameterPoint pp = modular_point(s.family, s.rank, s.c);
    CAPTURE(s.tag);
    CHECK(rel_diff(rhs_thm(pp), static_cast<double>(pp.rs().weyl_order) * rhs_CMalternative(pp)) < 1e-9);
  }
}

TEST_CASE("rank one closed form matches the A1 integral evaluation") {
  const ParameterPoint pp = modular_point(Family::A, 1, IdentityCase::I);
  const Complex k = kModularK.value_short;
  CHECK(rel_diff(2.0 * rhs_CMalternative(pp), a1_closed_form(kModularQp, k)) < 1e-10);
}

TEST_CASE("splitting identity pointwise") {
  Sampler rng(204);
  for (const auto& s : kShapes) {
    const ParameterPoint pp = modular_point(s.family, s.rank, s.c);
    CAPTURE(s.tag);
    int checked = 0;
    while (checked < 50) {
      const Eigen::VectorXd v = random_real_vector(pp.rs(), rng, 1.0);
      bool integral = false;
      for (const auto& a : pp.rs().positive_roots) integral = integral || std::abs(a.dot(v) - std::round(a.dot(v))) < 1e-3;
      if (integral) continue;
      const Complex lhs = integrand_I(pp, (kI * kModularQp.wminus()) * v.cast<Complex>());
      const Complex rhs = constant_K(pp) * density_Delta(pp, v) * density_DeltaTilde(pp, v);
      CHECK(std::abs(lhs - rhs) / (1.0 + std::abs(lhs)) < 1e-8);
      ++checked;
    }
  }
}

TEST_CASE("densities: trivial limits, periodicity, Weyl invariance, decay") {
  const auto b2 = build_shared(Family::B, 2);
  const ParameterPoint trivial(kModularQp, b2, IdentityCase::I, Multiplicity::uniform(0.0));
  const Eigen::VectorXd v = 0.31 * b2->fundamental_coweights[0] + 0.17 * b2->fundamental_coweights[1];
  CHECK(std::abs(density_Delta(trivial, v) - 1.0) < 1e-14);
  CHECK(std::abs(density_DeltaTilde(trivial, v) - 1.0) < 1e-14);
  CHECK(std::abs(constant_K(trivial) - 1.0) < 1e-15);

  Sampler rng(205);
  for (const auto& s : kShapes) {
    const ParameterPoint pp = modular_point(s.family, s.rank, s.c);
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd w = random_real_vector(pp.rs(), rng, 1.0);
      Eigen::VectorXd shift = Eigen::VectorXd::Zero(pp.rs().ambient_dim);
      for (int j = 0; j < s.rank; ++j) shift += rng.integer(-3, 3) * pp.rs().fundamental_coweights[j];
      CHECK(rel_diff(density_Delta(pp, w + shift), density_Delta(pp, w)) < 1e-10);
    }
    const Eigen::VectorXd w = random_real_vector(pp.rs(), rng, 1.0);
    for (const auto& image : weyl_orbit(pp.rs(), w)) {
      CHECK(rel_diff(density_Delta(pp, image), density_Delta(pp, w)) < 1e-10);
    }
  }

  // Rank one: a ratio of two qtilde-Pochhammer symbols per root sign.
  const auto a1 = build_shared(Family::A, 1);
  const ParameterPoint pp(kModularQp, a1, IdentityCase::I, kModularK);
  const double x = 0.37;
  const Eigen::VectorXd base = x * a1->fundamental_coweights[0];
  const Complex qt = kModularQp.qtilde();
  const Complex tt = std::exp(-2.0 * kPi * kI * kModularK.value_short / kModularQp.wplus());
  auto power = [&](double e) { return std::exp(-2.0 * kPi * kI * kModularQp.wminus() * e / kModularQp.wplus()); };
  const Complex direct = qpoch(tt * power(1 + x), qt) / qpoch(power(1 + x), qt) * qpoch(tt * power(1 - x), qt) /
                         qpoch(power(1 - x), qt);
  CHECK(rel_diff(density_DeltaTilde(pp, base), direct) < 1e-12);
  double previous = std::abs(density_DeltaTilde(pp, base));
  for (int m = 1; m <= 6; ++m) {
    const double now = std::abs(density_DeltaTilde(pp, base + m * a1->fundamental_coweights[0]));
    CHECK(now < previous);
    previous = now;
  }
  CHECK(previous < 1e-3 * std::abs(density_DeltaTilde(pp, base)));
  CHECK(kind_of([&] { density_DeltaTilde(pp, a1->fundamental_coweights[0]); }) == ErrorKind::IntegralityViolation);
}

TEST_CASE("K for rank one and as a sum of root terms") {
  const ParameterPoint a1 = modular_point(Family::A, 1, IdentityCase::I);
  const Complex k = kModularK.value_short, w = kModularQp.omega();
  const Complex wpm = kModularQp.wplus() * kModularQp.wminus();
  CHECK(rel_diff(constant_K(a1), std::exp(-kPi * kI * k * (k + 2.0 * w) / wpm)) < 1e-14);

  const ParameterPoint b2 = modular_point(Family::B, 2, IdentityCase::II);
  Complex log_k{0.0, 0.0};
  for (const auto& t : b2.terms()) log_k += -kPi * kI * t.k * (t.k + 2.0 * t.omega_alpha) / (t.u * wpm);
  CHECK(b2.terms().size() == 4);
  CHECK(rel_diff(constant_K(b2), std::exp(log_k)) < 1e-14);
}

TEST_CASE("N tends to one as k tends to zero") {
  for (const auto& s : kShapes) {
    CAPTURE(s.tag);
    double previous = 1.0;
    for (double scale : {1e-2, 1e-4, 1e-6}) {
      const Multiplicity k{scale * kModularK.value_short, scale * kModularK.value_long};
      const ParameterPoint pp(kModularQp, build_shared(s.family, s.rank), s.c, k);
      const double gap = std::abs(macdonald_N(pp) - 1.0);
      CHECK(gap < previous);
      previous = gap;
    }
    CHECK(previous < 1e-4);
  }
}

TEST_CASE("BC integrand: paired form, literal form and hyperoctahedral symmetry") {
  const BCParameters bp(kModularQp, {Complex(-0.2, -0.3), Complex(-0.3, -0.1), Complex(-0.25, -0.35), Complex(-0.15, -0.2)},
                        Complex(-0.12, -0.4), 2);
  REQUIRE(bp.in_S_BC());
  Sampler rng(206);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector2d v(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
    const Complex value = bc_integrand(bp, v);
    CHECK(rel_diff(value, bc_integrand_literal(bp, v)) < 1e-9);
    for (const Eigen::Vector2d& image : {Eigen::Vector2d(v[1], v[0]), Eigen::Vector2d(-v[0], v[1]),
                                         Eigen::Vector2d(v[0], -v[1]), Eigen::Vector2d(-v[1], -v[0])}) {
      CHECK(rel_diff(bc_integrand(bp, image), value) < 1e-10);
    }
  }
  const TabulatedBCIntegrand table(bp, 5.0);
  CHECK(rel_diff(table(Eigen::Vector2d(0.4, -1.1)), bc_integrand(bp, Eigen::Vector2d(0.4, -1.1))) < 1e-9);
}

TEST_CASE("duplication collapses the short-root numerator") {
  Sampler rng(207);
  const QuasiPeriods& qp = kModularQp;
  const Complex w = qp.omega();
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(-2.0, 2.0);
    Complex left{1.0, 0.0}, right{1.0, 0.0};
    for (const double y : {x, -x}) {
      left *= gamma(qp, 2.0 * y + kI * w).value;
      right *= gamma(qp, y + kI * w).value * gamma(qp, y + 0.5 * kI * qp.wplus()).value *
               gamma(qp, y + 0.5 * kI * qp.wminus()).value;
    }
    CHECK(rel_diff(left, right) < 1e-9);
  }
}

TEST_CASE("BC closed form") {
  const std::array<Complex, 4> g{Complex(-0.2, -0.3), Complex(-0.3, -0.1), Complex(-0.25, -0.35), Complex(-0.15, -0.2)};
  const Complex a = bc_rhs(BCParameters(kModularQp, g, Complex(-0.12, -0.4), 1));
  const Complex b = bc_rhs(BCParameters(kModularQp, g, Complex(-0.7, -0.9), 1));
  CHECK(rel_diff(a, b) < 1e-12);

  const ParameterPoint a1 = modular_point(Family::A, 1, IdentityCase::I);
  const BCSpecialization spec = bc_specialize(a1);
  CHECK(rel_diff(bc_rhs(spec.params), a1_closed_form(kModularQp, kModularK.value_short)) < 1e-11);
}

TEST_CASE("BC validator") {
  const std::array<Complex, 4> g{Complex(-0.2, -0.3), Complex(-0.3, -0.1), Complex(-0.25, -0.35), Complex(-0.15, -0.2)};
  CHECK(BCParameters(kModularQp, g, 1.0, 1).in_S_BC());
  const BCParameters bad_kappa(kModularQp, g, 1.0, 2);
  CHECK(bad_kappa.sbc_violation()->find("κ ∉ ℂ₋") != std::string::npos);
  CHECK(kind_of([&] { require_S_BC(bad_kappa); }) == ErrorKind::NotInSBC);
  std::array<Complex, 4> positive = g;
  positive[2] = Complex(0.1, -0.3);
  CHECK(BCParameters(kModularQp, positive, Complex(-0.12, -0.4), 2).sbc_violation()->find("γ3 ∉ ℂ₋") !=
        std::string::npos);
}

TEST_CASE("BC specialization of the rank one integrand") {
  const ParameterPoint pp = modular_point(Family::A, 1, IdentityCase::I);
  const BCSpecialization s = bc_specialize(pp);
  const Complex wp = kModularQp.wplus(), wm = kModularQp.wminus(), w = kModularQp.omega();
  const Complex k = kModularK.value_short;
  CHECK(s.prefactor == Complex(1.0));
  CHECK(s.params.rank() == 1);
  CHECK(s.params.gamma()[0] == k);
  CHECK(std::abs(s.params.gamma()[1] + 0.5 * wp) < 1e-15);
  CHECK(std::abs(s.params.gamma()[2] + 0.5 * wm) < 1e-15);
  CHECK(std::abs(s.params.gamma()[3] + w) < 1e-15);
  // Pointwise: the BC integrand at x is the A1 integrand at <alpha, v> = x.
  for (double x : {0.1, 0.45, 1.3}) {
    const Eigen::VectorXd v = x * pp.rs().fundamental_coweights[0];
    CHECK(rel_diff(bc_integrand(s.params, Eigen::VectorXd::Constant(1, x)), integrand_I(pp, v.cast<Complex>())) < 1e-9);
  }
  CHECK(kind_of([&] { bc_specialize(modular_point(Family::A, 1, IdentityCase::II)); }) ==
        ErrorKind::UnsupportedCombination);
  CHECK(kind_of([&] { bc_specialize(modular_point(Family::A, 2, IdentityCase::I)); }) ==
        ErrorKind::UnsupportedCombination);
}

TEST_CASE("BC specialization tables for B and C") {
  const Complex wp = kModularQp.wplus(), wm = kModularQp.wminus(), w = kModularQp.omega();
  const Complex ks = kModularK.value_short, kl = kModularK.value_long;
  auto same = [](const std::array<Complex, 4>& a, const std::array<Complex, 4>& b) {
    for (int r = 0; r < 4; ++r) {
      if (std::abs(a[r] - b[r]) > 1e-15) return false;
    }
    return true;
  };
  const auto b_i = bc_specialize(modular_point(Family::B, 2, IdentityCase::I));
  CHECK(same(b_i.params.gamma(), {ks, -0.5 * wp, -0.5 * wm, -w}));
  CHECK(b_i.params.kappa() == kl);
  CHECK(b_i.prefactor == Complex(1.0));

  const auto b_ii = bc_specialize(modular_point(Family::B, 2, IdentityCase::II));
  CHECK(std::abs(b_ii.params.qp().wplus() - 2.0 * wp) < 1e-15);
  CHECK(b_ii.params.qp().wminus() == wm);
  CHECK(same(b_ii.params.gamma(), {ks, ks - wp, -0.5 * wm, -wp - 0.5 * wm}));
  CHECK(std::abs(b_ii.params.kappa() - 2.0 * kl) < 1e-15);

  const auto c_i = bc_specialize(modular_point(Family::C, 2, IdentityCase::I));
  CHECK(same(c_i.params.gamma(), {0.5 * kl, 0.5 * kl - 0.5 * wp, 0.5 * kl - 0.5 * wm, 0.5 * kl - w}));
  CHECK(c_i.params.kappa() == ks);
  CHECK(c_i.prefactor == Complex(2.0));

  const auto c_ii = bc_specialize(modular_point(Family::C, 2, IdentityCase::II));
  CHECK(same(c_ii.params.gamma(), {kl, kl - 0.5 * wm, -0.5 * wp, -w}));
  CHECK(c_ii.params.kappa() == ks);
  CHECK(c_ii.prefactor == Complex(2.0));
  for (const auto* s : {&b_i, &b_ii, &c_i, &c_ii}) CHECK(s->params.in_S_BC());
}
