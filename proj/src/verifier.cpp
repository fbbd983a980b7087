#include "hyperct/verifier.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <sstream>

#include "hyperct/errors.hpp"
#include "hyperct/parallel.hpp"

namespace hyperct {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

nlohmann::json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

nlohmann::json point_params(const ParameterPoint& pp) {
  return {{"family", to_string(pp.rs().family)},
          {"rank", pp.rs().rank},
          {"case", to_string(pp.identity_case())},
          {"omega_plus", format_complex(pp.qp().wplus())},
          {"omega_minus", format_complex(pp.qp().wminus())},
          {"k_short", format_complex(pp.k().value_short)},
          {"k_long", format_complex(pp.k().value_long)}};
}

nlohmann::json bc_params(const BCParameters& bp) {
  nlohmann::json g = nlohmann::json::array();
  for (const Complex c : bp.gamma()) g.push_back(format_complex(c));
  return {{"rank", bp.rank()},
          {"omega_plus", format_complex(bp.qp().wplus())},
          {"omega_minus", format_complex(bp.qp().wminus())},
          {"gamma", g},
          {"kappa", format_complex(bp.kappa())}};
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

Eigen::VectorXd from_lambda(const std::vector<Eigen::VectorXd>& generators, std::span<const double> lambda) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(generators.front().size());
  for (std::size_t j = 0; j < generators.size(); ++j) v += lambda[j] * generators[j];
  return v;
}

// Distance of the nearest pairing <alpha, v> to an integer over all roots.
double integrality_gap(const RootSystemData& rs, const Eigen::VectorXd& v) {
  double gap = 1.0;
  for (const auto& a : rs.positive_roots) {
    const double x = a.dot(v);
    gap = std::min(gap, std::abs(x - std::round(x)));
  }
  return gap;
}

constexpr double kWallGuard = 1e-3;

// Box [0, R_1] x ... x [0, R_n] for an integrand bounded by
// C exp(-sum_j rate_j lambda_j) on the positive orthant.
struct Truncation {
  std::vector<double> probe_radius;
  std::vector<double> radius;
  double c_est = 0.0;
  double scale = 0.0;  // C_est / prod rate_j, the bound on the full integral
  double tail_bound = 0.0;
};

// Radii from a tail allowance relative to `scale`, the bound C_est / prod rate_j
// on the integral or, on a second pass, the integral itself.
void set_radii(Truncation& t, const std::vector<double>& rates, double scale, const QuadratureSpec& spec) {
  const int n = static_cast<int>(rates.size());
  const double allow = 0.1 * std::max(spec.abs_tol, spec.rel_tol * scale);
  const double log_ratio = std::log(std::max(std::exp(1.0), n * t.scale / allow));
  t.radius.clear();
  t.tail_bound = 0.0;
  for (const double r : rates) t.radius.push_back(spec.truncation_safety * log_ratio / r);
  for (int j = 0; j < n; ++j) t.tail_bound += t.scale * std::exp(-rates[j] * t.radius[j]);
}

Truncation choose_truncation(const std::function<Complex(std::span<const double>)>& f,
                             const std::vector<double>& rates, double probe_factor,
                             const QuadratureSpec& spec) {
  const int n = static_cast<int>(rates.size());
  Truncation t;
  for (const double r : rates) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      fail(ErrorKind::InvalidDecay, "integrand does not decay along a chamber generator (rate " +
                                        std::to_string(r) + ")");
    }
    t.probe_radius.push_back(probe_factor / r);
  }
  constexpr int kProbe = 5;
  int total = 1;
  for (int j = 0; j < n; ++j) total *= kProbe;
  std::vector<double> bound(total, 0.0);
  parallel_for(total, [&](int idx) {
    std::vector<double> lambda(n);
    double exponent = 0.0;
    int rest = idx;
    for (int j = 0; j < n; ++j) {
      lambda[j] = (static_cast<double>(rest % kProbe) + 0.5) / kProbe * t.probe_radius[j];
      exponent += rates[j] * lambda[j];
      rest /= kProbe;
    }
    bound[idx] = std::abs(f(lambda)) * std::exp(exponent);
  });
  t.c_est = *std::max_element(bound.begin(), bound.end());
  if (!(t.c_est > 0.0) || !std::isfinite(t.c_est)) {
    fail(ErrorKind::InvalidDecay, "decay probe returned a non-positive or non-finite bound");
  }
  t.scale = t.c_est;
  for (const double r : rates) t.scale /= r;
  set_radii(t, rates, t.scale, spec);
  return t;
}

nlohmann::json truncation_json(const Truncation& t, const std::vector<double>& rates) {
  return {{"decay_rates", rates},           {"probe_radius", t.probe_radius},
          {"probe_grid", "5^n midpoints"},  {"c_est", t.c_est},
          {"truncation_radii", t.radius},   {"tail_bound", t.tail_bound}};
}

struct BoxIntegral {
  IntegralResult result;
  std::string method;
};

BoxIntegral integrate_box(const std::function<Complex(std::span<const double>)>& f,
                          const std::vector<double>& radius, const QuadratureSpec& spec,
                          std::uint64_t seed) {
  const int n = static_cast<int>(radius.size());
  std::vector<double> lower(n, 0.0);
  if (n == 1) {
    auto g = [&](double x) { return f(std::span<const double>(&x, 1)); };
    return {integrate_interval(g, 0.0, radius[0], spec), "gauss-kronrod"};
  }
  if (n <= 3) return {integrate_box_nd(f, lower, radius, spec), "tensor gauss-legendre"};
  return {monte_carlo_box(f, lower, radius, spec, seed), "monte-carlo"};
}

// Interpolation error of the tabulated gamma lines; floored where double
// rounding in the direct evaluation takes over.
double line_tolerance(double tol) { return std::clamp(1e-3 * tol, 1e-12, 1e-10); }

struct ChamberIntegral {
  IntegralResult result;
  nlohmann::json diagnostics;
};

// Integrates over the truncated orthant in generator coordinates. The first
// pass sizes the box from the probed bound; when the integral turns out much
// smaller than that bound, a second pass sizes it from the integral.
// make_table(half_width) returns a tabulated integrand of lambda valid while
// the box radii map inside half_width.
template <typename MakeTable>
ChamberIntegral integrate_chamber(const std::function<Complex(std::span<const double>)>& direct,
                                  const std::vector<double>& rates,
                                  const std::function<double(const std::vector<double>&)>& reach,
                                  const MakeTable& make_table, const QuadratureSpec& spec,
                                  std::uint64_t seed) {
  Truncation trunc = choose_truncation(direct, rates, 8.0 * kPi, spec);
  double half_width = reach(trunc.radius) + 1.0;
  auto table = make_table(half_width);
  QuadratureSpec box_spec = spec;
  auto run = [&] {
    return integrate_box([&](std::span<const double> lambda) { return (*table)(lambda); }, trunc.radius,
                         box_spec, seed);
  };
  BoxIntegral box = run();
  int passes = 1;
  const double value = std::abs(box.result.value);
  const double target = spec.rel_tol * value;
  if (value > 0.0 && (trunc.tail_bound > 0.1 * target || box.result.error_estimate > target)) {
    // Keep the absolute floor below the relative target for small integrals.
    box_spec.abs_tol = std::min(spec.abs_tol, 0.1 * target);
    set_radii(trunc, rates, value, box_spec);
    const double needed = reach(trunc.radius) + 1.0;
    if (needed > half_width) {
      half_width = needed;
      table = make_table(half_width);
    }
    box = run();
    passes = 2;
  }
  nlohmann::json d = truncation_json(trunc, rates);
  d["truncation_passes"] = passes;
  d["abs_tol_used"] = box_spec.abs_tol;
  d["method"] = box.method;
  d["evaluations"] = box.result.evaluations;
  d["error_estimate"] = box.result.error_estimate;
  d["gamma_line_half_width"] = half_width;
  d["gamma_direct_evaluations"] = table->direct_evaluations();
  return {box.result, d};
}

// Integral of I over the positive chamber, dv normalized so that the
// coweight parallelepiped has unit volume (dv = d lambda).
ChamberIntegral hyperbolic_chamber_integral(const ParameterPoint& pp, const QuadratureSpec& spec,
                                            double tol, std::uint64_t seed) {
  const auto& rs = pp.rs();
  const int n = rs.rank;
  const Complex period = pp.qp().wplus() * pp.qp().wminus();
  const auto& cw = rs.fundamental_coweights;
  std::vector<double> rates(n);
  for (int j = 0; j < n; ++j) {
    rates[j] = 4.0 * kPi * std::real(pairing(pp.rho(), cw[j].cast<Complex>()) / period);
  }
  auto direct = [&](std::span<const double> lambda) {
    return integrand_I_alt(pp, from_lambda(cw, lambda).cast<Complex>());
  };
  auto reach = [&](const std::vector<double>& radius) {
    const Eigen::VectorXd corner = from_lambda(cw, radius);
    double w = 0.0;
    for (const auto& t : pp.terms()) w = std::max(w, std::abs(t.alpha_prime.dot(corner)));
    return w;
  };
  struct Table {
    TabulatedIntegrand integrand;
    const std::vector<Eigen::VectorXd>* generators;
    Complex operator()(std::span<const double> lambda) const { return integrand(from_lambda(*generators, lambda)); }
    long direct_evaluations() const { return integrand.direct_evaluations(); }
  };
  auto make_table = [&](double half_width) {
    return std::make_unique<Table>(Table{TabulatedIntegrand(pp, half_width, line_tolerance(tol)), &cw});
  };
  return integrate_chamber(direct, rates, reach, make_table, spec, seed);
}

// Integral of J over R^n through the chamber v_1 >= ... >= v_n >= 0, spanned
// by g_j = e_1 + ... + e_j with unit Jacobian.
ChamberIntegral bc_full_integral(const BCParameters& bp, const QuadratureSpec& spec, double tol) {
  const int n = bp.rank();
  const Complex period = bp.qp().wplus() * bp.qp().wminus();
  const double a = std::real(-kPi * (2.0 * bp.qp().omega() + bp.gamma_sum()) / period);
  const double b = std::real(-kPi * bp.kappa() / period);
  std::vector<Eigen::VectorXd> gens;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    g.head(j + 1).setOnes();
    gens.push_back(g);
  }
  // log|J| grows like sum over both signs of each root of rate * |<root, v>|,
  // linear in lambda inside the chamber.
  std::vector<double> rates(n);
  for (int j = 0; j < n; ++j) {
    const auto& g = gens[j];
    double exponent = 2.0 * a * g.cwiseAbs().sum();
    for (int r = 0; r < n; ++r) {
      for (int s = r + 1; s < n; ++s) {
        exponent += 2.0 * b * (std::abs(g[r] + g[s]) + std::abs(g[r] - g[s]));
      }
    }
    rates[j] = -exponent;
  }
  auto direct = [&](std::span<const double> lambda) { return bc_integrand(bp, from_lambda(gens, lambda)); };
  auto reach = [](const std::vector<double>& radius) {
    double w = 0.0;
    for (const double r : radius) w += r;
    return w;
  };
  struct Table {
    TabulatedBCIntegrand integrand;
    const std::vector<Eigen::VectorXd>* generators;
    Complex operator()(std::span<const double> lambda) const { return integrand(from_lambda(*generators, lambda)); }
    long direct_evaluations() const { return integrand.direct_evaluations(); }
  };
  auto make_table = [&](double half_width) {
    return std::make_unique<Table>(Table{TabulatedBCIntegrand(bp, half_width, line_tolerance(tol)), &gens});
  };
  ChamberIntegral out = integrate_chamber(direct, rates, reach, make_table, spec, 1);
  double symmetry = 1.0;
  for (int j = 1; j <= n; ++j) symmetry *= 2.0 * j;
  out.result.value *= symmetry;
  out.result.error_estimate *= symmetry;
  out.diagnostics["chamber_factor"] = symmetry;
  return out;
}

void require_modular_point(const ParameterPoint& pp) {
  if (auto v = pp.modular_violation()) fail(ErrorKind::NotInSPrime, *v);
}

std::vector<double> default_base(const RootSystemData& rs) {
  std::vector<double> lambda(rs.rank);
  for (int j = 0; j < rs.rank; ++j) lambda[j] = 0.37 - 0.13 * j;
  for (int attempt = 0; attempt < 10; ++attempt) {
    if (integrality_gap(rs, from_lambda(rs.fundamental_coweights, lambda)) >= kWallGuard) return lambda;
    for (int j = 0; j < rs.rank; ++j) lambda[j] += 0.0731 * (j + 1);
  }
  fail(ErrorKind::IntegralityViolation, "no base point away from the integrality walls");
}

}  // namespace

void grade(VerificationReport& r) {
  r.abs_err = std::abs(r.lhs - r.rhs);
  const double scale = std::abs(r.rhs);
  r.rel_err = scale > 0.0 ? r.abs_err / scale : std::numeric_limits<double>::infinity();
  r.passed = scale < 1e-6 ? r.abs_err <= r.tol : r.rel_err <= r.tol;
}

double default_hyperbolic_tol(int rank) {
  if (rank <= 1) return 1e-6;
  if (rank == 2) return 1e-4;
  return 1e-3;
}

VerificationReport verify_hyperbolic_ct(const ParameterPoint& pp, const QuadratureSpec& spec, double tol,
                                        std::uint64_t seed) {
  const auto start = Clock::now();
  spec.validate();
  require_S(pp);
  VerificationReport r;
  r.identity = "hyperbolic";
  r.params = point_params(pp);
  const bool user_tol = tol > 0.0;
  r.tol = user_tol ? tol : default_hyperbolic_tol(pp.rs().rank);
  const ChamberIntegral lhs = hyperbolic_chamber_integral(pp, spec, r.tol, seed);
  r.lhs = lhs.result.value;
  r.rhs = rhs_CMalternative(pp);
  r.diagnostics = lhs.diagnostics;
  if (pp.rs().rank > 3 && !user_tol) {
    r.tol = std::max(r.tol, 3.0 * lhs.result.error_estimate / std::abs(r.rhs));
  }
  grade(r);
  r.wall_ms = elapsed_ms(start);
  return r;
}

VerificationReport verify_q_constant_term(const ParameterPoint& pp, int grid, double tol) {
  const auto start = Clock::now();
  require_S_prime(pp);
  const auto& rs = pp.rs();
  if (rs.rank > 3) fail(ErrorKind::DimensionTooLarge, "q constant term supports rank <= 3");
  if (grid < 2) fail(ErrorKind::InvalidArgument, "grid must be >= 2");
  VerificationReport r;
  r.identity = "qct";
  r.params = point_params(pp);
  r.tol = tol;
  auto density = [&](std::span<const double> lambda) {
    return density_Delta(pp, from_lambda(rs.fundamental_coweights, lambda));
  };
  const Complex coarse = trapezoid_periodic_nd(density, rs.rank, grid);
  const Complex fine = trapezoid_periodic_nd(density, rs.rank, 2 * grid);
  r.lhs = fine;
  r.rhs = macdonald_N(pp);
  grade(r);
  const double agreement = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
  r.passed = r.passed && agreement <= tol;
  r.diagnostics = {{"grid", grid},
                   {"grid_doubled", 2 * grid},
                   {"lhs_coarse", complex_json(coarse)},
                   {"grid_agreement", agreement},
                   {"measure", "coweight coordinates, unit volume fundamental domain"}};
  r.wall_ms = elapsed_ms(start);
  return r;
}

VerificationReport verify_q_sum(const ParameterPoint& pp, std::vector<double> base_lambda, double tail_tol,
                                double tol) {
  const auto start = Clock::now();
  require_S_prime(pp);
  const auto& rs = pp.rs();
  const auto& cw = rs.fundamental_coweights;
  if (base_lambda.empty()) base_lambda = default_base(rs);
  if (static_cast<int>(base_lambda.size()) != rs.rank) {
    fail(ErrorKind::DimensionMismatch, "base point needs " + std::to_string(rs.rank) + " coordinates");
  }
  const Eigen::VectorXd base = from_lambda(cw, base_lambda);
  if (integrality_gap(rs, base) < kWallGuard) {
    fail(ErrorKind::IntegralityViolation, "base point has <alpha, v> within 1e-3 of an integer");
  }
  Eigen::VectorXd shifted = base;
  double shift = 0.3;
  for (int attempt = 0;; ++attempt) {
    shifted = base + shift * cw[0];
    if (integrality_gap(rs, shifted) >= kWallGuard) break;
    if (attempt == 10) fail(ErrorKind::IntegralityViolation, "no shifted base point off the walls");
    shift += 0.0731;
  }
  auto sum_at = [&](const Eigen::VectorXd& v0) {
    return lattice_sum([&](const Eigen::VectorXd& m) { return density_DeltaTilde(pp, v0 + m); }, cw, tail_tol);
  };
  const LatticeSumResult first = sum_at(base);
  const LatticeSumResult second = sum_at(shifted);
  VerificationReport r;
  r.identity = "qsum";
  r.params = point_params(pp);
  r.tol = tol;
  r.lhs = first.value;
  r.rhs = macdonald_Ntilde(pp);
  grade(r);
  const double independence = std::abs(first.value - second.value) / std::max(std::abs(r.rhs), 1e-300);
  r.passed = r.passed && independence <= tol;
  r.diagnostics = {{"base_lambda", base_lambda},
                   {"shift_along_first_coweight", shift},
                   {"lhs_shifted", complex_json(second.value)},
                   {"base_independence", independence},
                   {"lattice_radius", std::max(first.radius, second.radius)},
                   {"terms", first.terms + second.terms},
                   {"last_shell", std::max(first.last_shell, second.last_shell)},
                   {"tail_tol", tail_tol}};
  r.wall_ms = elapsed_ms(start);
  return r;
}

VerificationReport verify_split(const ParameterPoint& pp, int count, std::uint64_t seed, double tol) {
  const auto start = Clock::now();
  require_modular_point(pp);
  if (count < 1) fail(ErrorKind::InvalidArgument, "count must be positive");
  const auto& rs = pp.rs();
  const Complex k = constant_K(pp);
  const Complex im = kI * pp.qp().wminus();
  std::mt19937_64 engine(seed);
  VerificationReport r;
  r.identity = "split";
  r.params = point_params(pp);
  r.tol = tol;
  double worst = -1.0;
  int resamples = 0;
  std::vector<double> lambda(rs.rank);
  for (int p = 0; p < count; ++p) {
    Eigen::VectorXd v;
    for (int attempt = 0;; ++attempt) {
      for (auto& x : lambda) x = 2.0 * unit_uniform(engine) - 1.0;
      v = from_lambda(rs.fundamental_coweights, lambda);
      if (integrality_gap(rs, v) >= kWallGuard) break;
      ++resamples;
      if (attempt == 9) fail(ErrorKind::NearSingularity, "10 consecutive samples hit an integrality wall");
    }
    const Complex lhs = integrand_I(pp, (im * v.cast<Complex>()).eval());
    const Complex rhs = k * density_Delta(pp, v) * density_DeltaTilde(pp, v);
    const double residual = std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
    if (residual > worst) {
      worst = residual;
      r.lhs = lhs;
      r.rhs = rhs;
    }
  }
  r.abs_err = std::abs(r.lhs - r.rhs);
  r.rel_err = worst;
  r.passed = worst <= tol;
  r.diagnostics = {{"count", count},
                   {"seed", seed},
                   {"resamples", resamples},
                   {"max_residual", worst},
                   {"residual", "|I - K Delta DeltaTilde| / (1 + |I|)"}};
  r.wall_ms = elapsed_ms(start);
  return r;
}

VerificationReport verify_shintani(const QuasiPeriods& qp, int count, std::uint64_t seed, double tol) {
  const auto start = Clock::now();
  if (!(std::imag(qp.wplus() / qp.wminus()) > 0.0)) {
    fail(ErrorKind::ModularPointInvalid, "w+/w- ∉ ℍ₊");
  }
  if (count < 1) fail(ErrorKind::InvalidArgument, "count must be positive");
  std::mt19937_64 engine(seed);
  const double strip = 0.9 * qp.omega().real();
  VerificationReport r;
  r.identity = "shintani";
  r.params = {{"omega_plus", format_complex(qp.wplus())}, {"omega_minus", format_complex(qp.wminus())}};
  r.tol = tol;
  double worst = -1.0;
  for (int p = 0; p < count; ++p) {
    const double x = 4.0 * unit_uniform(engine) - 2.0;
    const double y = strip * (2.0 * unit_uniform(engine) - 1.0);
    const Complex z{x, y};
    const Complex product = shintani_product(qp, z);
    const Complex value = gamma(qp, z).value;
    const double dev = std::abs(product - value) / std::abs(value);
    if (dev > worst) {
      worst = dev;
      r.lhs = product;
      r.rhs = value;
    }
  }
  r.abs_err = std::abs(r.lhs - r.rhs);
  r.rel_err = worst;
  r.passed = worst <= tol;
  r.diagnostics = {{"count", count}, {"seed", seed}, {"strip_half_width", strip}, {"max_rel_dev", worst}};
  r.wall_ms = elapsed_ms(start);
  return r;
}

VerificationReport verify_bc(const BCParameters& bp, const QuadratureSpec& spec, double tol) {
  const auto start = Clock::now();
  if (bp.rank() > 2) fail(ErrorKind::DimensionTooLarge, "rank > 2 unsupported for deterministic bc");
  spec.validate();
  require_S_BC(bp);
  VerificationReport r;
  r.identity = "bc";
  r.params = bc_params(bp);
  r.tol = tol > 0.0 ? tol : default_hyperbolic_tol(bp.rank());
  const ChamberIntegral lhs = bc_full_integral(bp, spec, r.tol);
  r.lhs = lhs.result.value;
  r.rhs = bc_rhs(bp);
  r.diagnostics = lhs.diagnostics;
  grade(r);
  r.wall_ms = elapsed_ms(start);
  return r;
}

VerificationReport verify_bc_specialization(const ParameterPoint& pp, const QuadratureSpec& spec, double tol) {
  const auto start = Clock::now();
  spec.validate();
  const BCSpecialization s = bc_specialize(pp);
  if (s.params.rank() > 2) fail(ErrorKind::DimensionTooLarge, "rank > 2 unsupported for deterministic bc");
  VerificationReport r;
  r.identity = "bc";
  r.params = point_params(pp);
  r.params["specialize"] = true;
  r.tol = tol > 0.0 ? tol : default_hyperbolic_tol(pp.rs().rank);
  const ChamberIntegral bc = bc_full_integral(s.params, spec, r.tol);
  const ChamberIntegral hyp = hyperbolic_chamber_integral(pp, spec, r.tol, 1);
  const double weyl = static_cast<double>(pp.rs().weyl_order);
  r.lhs = s.prefactor * bc.result.value;
  r.rhs = weyl * hyp.result.value;
  grade(r);
  const Complex n_bc = bc_rhs(s.params);
  const Complex closed = weyl * rhs_CMalternative(pp);
  const double closed_err = std::abs(s.prefactor * n_bc - closed) / std::abs(closed);
  const double bc_err = std::abs(bc.result.value - n_bc) / std::abs(n_bc);
  r.passed = r.passed && closed_err <= r.tol && bc_err <= r.tol;
  r.diagnostics = {{"period_map", s.period_map},
                   {"prefactor", complex_json(s.prefactor)},
                   {"bc_parameters", bc_params(s.params)},
                   {"bc_integral", complex_json(bc.result.value)},
                   {"bc_closed_form", complex_json(n_bc)},
                   {"bc_rel_err", bc_err},
                   {"closed_form_rel_err", closed_err},
                   {"bc", bc.diagnostics},
                   {"hyperbolic", hyp.diagnostics}};
  if (pp.rs().family == Family::A && pp.rs().rank == 1) {
    const Complex a1 = a1_closed_form(pp.qp(), pp.k().value_short);
    r.diagnostics["a1_closed_form"] = complex_json(a1);
    r.diagnostics["a1_rel_err"] = std::abs(n_bc - a1) / std::abs(a1);
    r.passed = r.passed && std::abs(n_bc - a1) <= r.tol * std::abs(a1);
  }
  r.wall_ms = elapsed_ms(start);
  return r;
}

VerificationReport verify_closed_form_chain(const ParameterPoint& pp, double tol) {
  const auto start = Clock::now();
  require_S_prime(pp);
  VerificationReport r;
  r.identity = "chain";
  r.params = point_params(pp);
  r.tol = tol;
  const int n = pp.rs().rank;
  r.lhs = std::pow(kI * pp.qp().wminus(), n) * constant_K(pp) * macdonald_N(pp) * macdonald_Ntilde(pp);
  r.rhs = static_cast<double>(pp.rs().weyl_order) * rhs_CMalternative(pp);
  grade(r);
  r.diagnostics = {{"quadrature", "none"}};
  r.wall_ms = elapsed_ms(start);
  return r;
}

std::string to_string(Identity id) {
  switch (id) {
    case Identity::Hyperbolic: return "hyperbolic";
    case Identity::QConstantTerm: return "qct";
    case Identity::QSum: return "qsum";
    case Identity::Split: return "split";
    case Identity::Shintani: return "shintani";
    case Identity::BC: return "bc";
    case Identity::Chain: return "chain";
  }
  return "unknown";
}

Identity parse_identity(const std::string& text) {
  for (const Identity id : {Identity::Hyperbolic, Identity::QConstantTerm, Identity::QSum, Identity::Split,
                            Identity::Shintani, Identity::BC, Identity::Chain}) {
    if (to_string(id) == text) return id;
  }
  fail(ErrorKind::InvalidArgument, "unknown identity '" + text + "'");
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
    fail(ErrorKind::InvalidArgument, "complex literal must be RE,IM: '" + text + "'");
  }
  auto parse_part = [&](std::string_view part) {
    double x = 0.0;
    const char* first = part.data();
    const char* last = part.data() + part.size();
    if (!part.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, x, std::chars_format::general);
    if (part.empty() || ec != std::errc() || ptr != last || !std::isfinite(x)) {
      fail(ErrorKind::InvalidArgument, "complex literal must be RE,IM with decimal parts: '" + text + "'");
    }
    return x;
  };
  const std::string_view view(text);
  return {parse_part(view.substr(0, comma)), parse_part(view.substr(comma + 1))};
}

std::string format_complex(Complex z) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), z.real());
  *res.ptr++ = ',';
  res = std::to_chars(res.ptr, buf + sizeof(buf), z.imag());
  return std::string(buf, res.ptr);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

nlohmann::json to_json(const PointSpec& p) {
  nlohmann::json g = nlohmann::json::array();
  for (const Complex c : p.gamma) g.push_back(format_complex(c));
  return {{"identity", to_string(p.identity)},
          {"family", to_string(p.family)},
          {"rank", p.rank},
          {"case", to_string(p.identity_case)},
          {"omega_plus", format_complex(p.omega_plus)},
          {"omega_minus", format_complex(p.omega_minus)},
          {"k_short", format_complex(p.k_short)},
          {"k_long", format_complex(p.k_long)},
          {"gamma", g},
          {"kappa", format_complex(p.kappa)},
          {"specialize", p.specialize},
          {"tol", p.tol},
          {"rel_tol", p.spec.rel_tol},
          {"abs_tol", p.spec.abs_tol},
          {"max_subdivisions", p.spec.max_subdivisions},
          {"truncation_safety", p.spec.truncation_safety},
          {"mc_samples", p.spec.mc_samples},
          {"grid", p.grid},
          {"count", p.count},
          {"seed", p.seed},
          {"base", p.base},
          {"tail_tol", p.tail_tol}};
}

namespace {

Complex json_complex(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) fail(ErrorKind::InvalidArgument, "'" + key + "' must be a \"RE,IM\" string");
  return parse_complex(v.get<std::string>());
}

template <typename T>
T json_number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) fail(ErrorKind::InvalidArgument, "'" + key + "' must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) fail(ErrorKind::InvalidArgument, "'" + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned()) return v.get<T>();
      if (v.get<long long>() < 0) fail(ErrorKind::InvalidArgument, "'" + key + "' must be non-negative");
      return static_cast<T>(v.get<long long>());
    }
  }
  return v.get<T>();
}

void apply_key(PointSpec& p, const std::string& key, const nlohmann::json& v) {
  if (key == "identity") {
    if (!v.is_string()) fail(ErrorKind::InvalidArgument, "'identity' must be a string");
    p.identity = parse_identity(v.get<std::string>());
  } else if (key == "family") {
    if (!v.is_string()) fail(ErrorKind::InvalidArgument, "'family' must be a string");
    p.family = parse_family(v.get<std::string>());
  } else if (key == "rank") {
    p.rank = json_number<int>(v, key);
  } else if (key == "case") {
    if (!v.is_string()) fail(ErrorKind::InvalidArgument, "'case' must be a string");
    p.identity_case = parse_case(v.get<std::string>());
  } else if (key == "omega_plus") {
    p.omega_plus = json_complex(v, key);
  } else if (key == "omega_minus") {
    p.omega_minus = json_complex(v, key);
  } else if (key == "k") {
    p.k_short = p.k_long = json_complex(v, key);
  } else if (key == "k_short") {
    p.k_short = json_complex(v, key);
  } else if (key == "k_long") {
    p.k_long = json_complex(v, key);
  } else if (key == "gamma") {
    if (!v.is_array() || v.size() != 4) fail(ErrorKind::InvalidArgument, "'gamma' must hold 4 complex strings");
    for (int r = 0; r < 4; ++r) p.gamma[r] = json_complex(v[r], key);
  } else if (key == "kappa") {
    p.kappa = json_complex(v, key);
  } else if (key == "specialize") {
    if (!v.is_boolean()) fail(ErrorKind::InvalidArgument, "'specialize' must be a boolean");
    p.specialize = v.get<bool>();
  } else if (key == "tol") {
    p.tol = json_number<double>(v, key);
  } else if (key == "rel_tol") {
    p.spec.rel_tol = json_number<double>(v, key);
  } else if (key == "abs_tol") {
    p.spec.abs_tol = json_number<double>(v, key);
  } else if (key == "max_subdivisions") {
    p.spec.max_subdivisions = json_number<int>(v, key);
  } else if (key == "truncation_safety") {
    p.spec.truncation_safety = json_number<double>(v, key);
  } else if (key == "mc_samples") {
    p.spec.mc_samples = json_number<long>(v, key);
  } else if (key == "grid") {
    p.grid = json_number<int>(v, key);
  } else if (key == "count") {
    p.count = json_number<int>(v, key);
  } else if (key == "seed") {
    p.seed = json_number<std::uint64_t>(v, key);
  } else if (key == "base") {
    if (!v.is_array()) fail(ErrorKind::InvalidArgument, "'base' must be an array of numbers");
    p.base.clear();
    for (const auto& x : v) p.base.push_back(json_number<double>(x, key));
  } else if (key == "tail_tol") {
    p.tail_tol = json_number<double>(v, key);
  } else {
    fail(ErrorKind::InvalidArgument, "unknown key '" + key + "'");
  }
}

}  // namespace

PointSpec point_from_json(const nlohmann::json& j, const PointSpec& defaults) {
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, "point must be a JSON object");
  PointSpec p = defaults;
  // "k" first so explicit k_short / k_long override it.
  if (j.contains("k")) apply_key(p, "k", j.at("k"));
  for (const auto& [key, value] : j.items()) {
    if (key != "k") apply_key(p, key, value);
  }
  return p;
}

std::vector<PointSpec> parse_sweep_config(const nlohmann::json& config) {
  if (!config.is_object()) fail(ErrorKind::InvalidArgument, "sweep config must be a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (key != "points" && key != "defaults") fail(ErrorKind::InvalidArgument, "unknown key '" + key + "'");
  }
  if (!config.contains("points") || !config.at("points").is_array()) {
    fail(ErrorKind::InvalidArgument, "sweep config needs a \"points\" array");
  }
  PointSpec defaults;
  if (config.contains("defaults")) defaults = point_from_json(config.at("defaults"));
  std::vector<PointSpec> points;
  for (const auto& item : config.at("points")) points.push_back(point_from_json(item, defaults));
  return points;
}

namespace {

ParameterPoint make_point(const PointSpec& p) {
  return ParameterPoint(QuasiPeriods(p.omega_plus, p.omega_minus), build_shared(p.family, p.rank),
                        p.identity_case, Multiplicity{p.k_short, p.k_long});
}

}  // namespace

VerificationReport run_point(const PointSpec& p) {
  const auto start = Clock::now();
  VerificationReport r;
  try {
    p.spec.validate();
    switch (p.identity) {
      case Identity::Shintani:
        r = verify_shintani(QuasiPeriods(p.omega_plus, p.omega_minus), p.count, p.seed,
                            p.tol > 0.0 ? p.tol : 1e-10);
        break;
      case Identity::BC:
        if (p.rank > 2) fail(ErrorKind::DimensionTooLarge, "rank > 2 unsupported for deterministic bc");
        if (p.specialize) {
          r = verify_bc_specialization(make_point(p), p.spec, p.tol);
        } else {
          r = verify_bc(BCParameters(QuasiPeriods(p.omega_plus, p.omega_minus), p.gamma, p.kappa, p.rank),
                        p.spec, p.tol);
        }
        break;
      case Identity::Hyperbolic:
        r = verify_hyperbolic_ct(make_point(p), p.spec, p.tol, p.seed);
        break;
      case Identity::QConstantTerm:
        r = verify_q_constant_term(make_point(p), p.grid, p.tol > 0.0 ? p.tol : 1e-7);
        break;
      case Identity::QSum:
        r = verify_q_sum(make_point(p), p.base, p.tail_tol, p.tol > 0.0 ? p.tol : 1e-7);
        break;
      case Identity::Split:
        r = verify_split(make_point(p), p.count, p.seed, p.tol > 0.0 ? p.tol : 1e-8);
        break;
      case Identity::Chain:
        r = verify_closed_form_chain(make_point(p), p.tol > 0.0 ? p.tol : 1e-8);
        break;
    }
  } catch (const Error& e) {
    r = VerificationReport{};
    r.identity = to_string(p.identity);
    r.error = e.kind();
    r.tol = p.tol;
    r.abs_err = r.rel_err = std::numeric_limits<double>::quiet_NaN();
    r.passed = false;
    r.diagnostics = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
  r.params = to_json(p);
  r.wall_ms = elapsed_ms(start);
  return r;
}

std::vector<VerificationReport> sweep(const std::vector<PointSpec>& points) {
  std::vector<VerificationReport> out(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) { out[i] = run_point(points[i]); });
  return out;
}

nlohmann::json to_json(const VerificationReport& r) {
  return {{"identity", r.identity}, {"params", r.params},   {"lhs", complex_json(r.lhs)},
          {"rhs", complex_json(r.rhs)}, {"abs_err", r.abs_err}, {"rel_err", r.rel_err},
          {"tol", r.tol},            {"passed", r.passed}, {"diagnostics", r.diagnostics},
          {"wall_ms", r.wall_ms}};
}

namespace {

void write_json(std::ostream& os, const nlohmann::json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << nlohmann::json(key).dump() << ": ";
        write_json(os, value, indent, depth + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) {
        os << format_double(x);
      } else {
        os << "null";
      }
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& j) {
  std::ostringstream os;
  write_json(os, j, 2, 0);
  return os.str();
}

std::string dump_reports(const std::vector<VerificationReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return dump_json(arr);
}

}  // namespace hyperct
