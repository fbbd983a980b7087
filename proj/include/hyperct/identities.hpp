#pragma once

// Closed forms, integrands and densities of the hyperbolic and q-type
// constant term identities, and the BC-type integral.

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperct/hypergamma.hpp"
#include "hyperct/rootsys.hpp"

namespace hyperct {

// Per positive root data derived from a parameter point.
struct RootTerm {
  Eigen::VectorXd alpha;
  Eigen::VectorXd alpha_prime;  // u * alpha
  Eigen::VectorXd coroot;
  double u = 1.0;
  Complex k{0.0, 0.0};
  Complex omega_alpha{0.0, 0.0};  // (w+ + u w-)/2
  bool simple = false;
  bool short_root = true;
};

class ParameterPoint {
 public:
  ParameterPoint(QuasiPeriods qp, std::shared_ptr<const RootSystemData> rs, IdentityCase c,
                 Multiplicity k);

  const QuasiPeriods& qp() const { return qp_; }
  const RootSystemData& rs() const { return *rs_; }
  std::shared_ptr<const RootSystemData> rs_ptr() const { return rs_; }
  IdentityCase identity_case() const { return case_; }
  const Multiplicity& k() const { return k_; }
  const std::vector<RootTerm>& terms() const { return terms_; }
  const Eigen::VectorXcd& rho() const { return rho_; }
  // Quasi-periods (w+, u w-) of G_alpha.
  QuasiPeriods qp_alpha(const RootTerm& t) const { return qp_.with_minus_scaled(t.u); }

  // Names of all violated conditions joined by "; ", or nullopt when the point is in S.
  std::optional<std::string> s_violation() const;
  bool in_S() const { return !s_violation().has_value(); }
  std::optional<std::string> s_prime_violation() const;
  bool in_S_prime() const { return !s_prime_violation().has_value(); }
  // The quasi-period part of S' only: w+/w- in the upper half-plane, which
  // is what the q-expansions of G need.
  std::optional<std::string> modular_violation() const;

  Complex q_alpha(const RootTerm& t) const;
  Complex qtilde_alpha(const RootTerm& t) const;
  Complex t_alpha(const RootTerm& t) const;
  Complex ttilde_alpha(const RootTerm& t) const;
  // qtilde_alpha^z = exp(-2 pi i u w- z / w+).
  Complex qtilde_power(const RootTerm& t, Complex z) const;

 private:
  QuasiPeriods qp_;
  std::shared_ptr<const RootSystemData> rs_;
  IdentityCase case_;
  Multiplicity k_;
  std::vector<RootTerm> terms_;
  Eigen::VectorXcd rho_;
};

// Throw NotInS / NotInSPrime naming the violated condition.
void require_S(const ParameterPoint& pp);
void require_S_prime(const ParameterPoint& pp);

// Product over all roots of G_a(<a',v> + i w_a) / G_a(<a',v> + i(k_a + w_a)).
Complex integrand_I(const ParameterPoint& pp, const Eigen::VectorXcd& v,
                    const QuadratureSpec& spec = gamma_default_spec());

// The same function through the sinh form over positive roots.
Complex integrand_I_alt(const ParameterPoint& pp, const Eigen::VectorXcd& v,
                        const QuadratureSpec& spec = gamma_default_spec());

// integrand_I_alt for real v with the gamma factors read from tabulated
// lines. Build once per parameter point, then evaluate many times.
class TabulatedIntegrand {
 public:
  // half_width bounds |<a', v>| over the region that will be sampled.
  TabulatedIntegrand(const ParameterPoint& pp, double half_width, double tolerance = 1e-12);
  Complex operator()(const Eigen::VectorXd& v) const;
  long direct_evaluations() const;

 private:
  const ParameterPoint* pp_;
  std::vector<std::shared_ptr<const GammaLine>> lines_;  // per term
};

Complex density_Delta(const ParameterPoint& pp, const Eigen::VectorXd& v, double eps = 1e-17);
Complex density_DeltaTilde(const ParameterPoint& pp, const Eigen::VectorXd& v, double eps = 1e-17);

Complex constant_K(const ParameterPoint& pp);
Complex rhs_CMalternative(const ParameterPoint& pp, const QuadratureSpec& spec = gamma_default_spec());
Complex rhs_thm(const ParameterPoint& pp, const QuadratureSpec& spec = gamma_default_spec());
Complex macdonald_N(const ParameterPoint& pp, double eps = 1e-17);
Complex macdonald_Ntilde(const ParameterPoint& pp, double eps = 1e-17);

class BCParameters {
 public:
  BCParameters(QuasiPeriods qp, std::array<Complex, 4> gamma, Complex kappa, int rank);

  const QuasiPeriods& qp() const { return qp_; }
  const std::array<Complex, 4>& gamma() const { return gamma_; }
  Complex gamma_sum() const { return gamma_[0] + gamma_[1] + gamma_[2] + gamma_[3]; }
  Complex kappa() const { return kappa_; }
  int rank() const { return rank_; }

  std::optional<std::string> sbc_violation() const;
  bool in_S_BC() const { return !sbc_violation().has_value(); }

 private:
  QuasiPeriods qp_;
  std::array<Complex, 4> gamma_;
  Complex kappa_;
  int rank_;
};

void require_S_BC(const BCParameters& bp);

// BC integrand with the +-alpha factors paired through the reflection and
// product identities (no zeros of G are evaluated).
Complex bc_integrand(const BCParameters& bp, const Eigen::VectorXd& v,
                     const QuadratureSpec& spec = gamma_default_spec());
// The BC integrand as a literal product of gamma values.
Complex bc_integrand_literal(const BCParameters& bp, const Eigen::VectorXd& v,
                             const QuadratureSpec& spec = gamma_default_spec());

class TabulatedBCIntegrand {
 public:
  TabulatedBCIntegrand(const BCParameters& bp, double half_width, double tolerance = 1e-12);
  Complex operator()(const Eigen::VectorXd& v) const;
  long direct_evaluations() const;

 private:
  const BCParameters* bp_;
  std::array<std::shared_ptr<const GammaLine>, 4> short_lines_;
  std::shared_ptr<const GammaLine> long_line_;
};

Complex bc_rhs(const BCParameters& bp, const QuadratureSpec& spec = gamma_default_spec());

// 4 sqrt(w+ w-) G(i(k+w)) G(i(k-w)) / G(i(2k+w)), the rank one evaluation.
Complex a1_closed_form(const QuasiPeriods& qp, Complex k, const QuadratureSpec& spec = gamma_default_spec());

struct BCSpecialization {
  BCParameters params;
  Complex prefactor{1.0, 0.0};  // int_V I dv = prefactor * J_BC
  std::string period_map;
};

// Supported: A1 case (i), B_n and C_n (n >= 2) in both cases.
BCSpecialization bc_specialize(const ParameterPoint& pp);

}  // namespace hyperct
