#include "hyperct/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "hyperct/errors.hpp"

namespace hyperct {

namespace {

std::string show(Complex z) {
  std::ostringstream out;
  out.precision(6);
  out << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return out.str();
}

std::string root_label(const RootSystemData& rs, const RootTerm& t) {
  if (rs.simply_laced()) return "";
  return t.short_root ? " on short roots" : " on long roots";
}

Complex log_G(const QuasiPeriods& qp, Complex z, const QuadratureSpec& spec) {
  return gamma(qp, z, spec).log_value;
}

bool is_neg_inf(Complex z) { return std::isinf(z.real()) && z.real() < 0.0; }

}  // namespace

ParameterPoint::ParameterPoint(QuasiPeriods qp, std::shared_ptr<const RootSystemData> rs,
                               IdentityCase c, Multiplicity k)
    : qp_(qp), rs_(std::move(rs)), case_(c), k_(k) {
  if (!rs_) fail(ErrorKind::InvalidArgument, "parameter point needs a root system");
  if (!is_finite(k.value_short) || !is_finite(k.value_long)) {
    fail(ErrorKind::InvalidArgument, "multiplicities must be finite");
  }
  if (rs_->simply_laced()) k_.value_long = k_.value_short;
  for (const auto& a : rs_->positive_roots) {
    RootTerm t;
    t.alpha = a;
    auto [u, prime] = u_and_prime(*rs_, c, a);
    t.u = u;
    t.alpha_prime = prime;
    t.coroot = coroot(a);
    t.k = k_.at(*rs_, a);
    t.omega_alpha = 0.5 * (qp_.wplus() + u * qp_.wminus());
    t.simple = rs_->is_simple(a);
    t.short_root = rs_->is_short(a);
    terms_.push_back(std::move(t));
  }
  rho_ = rho_k(*rs_, k_);
}

namespace {

// Collects distinct violation messages and joins them with "; ".
class Violations {
 public:
  void add(const std::string& message) {
    if (std::find(items_.begin(), items_.end(), message) == items_.end()) items_.push_back(message);
  }
  std::optional<std::string> result() const {
    if (items_.empty()) return std::nullopt;
    std::string out = items_.front();
    for (std::size_t i = 1; i < items_.size(); ++i) out += "; " + items_[i];
    return out;
  }

 private:
  std::vector<std::string> items_;
};

}  // namespace

std::optional<std::string> ParameterPoint::s_violation() const {
  Violations v;
  const Complex prod = qp_.wplus() * qp_.wminus();
  if (!(prod.imag() < 0.0)) v.add("ω₊ω₋ ∉ ℍ₋ (Im(ω₊ω₋) = " + std::to_string(prod.imag()) + ")");
  for (const auto& t : terms_) {
    if (!(t.k.real() < 0.0)) v.add("k ∉ ℂ₋" + root_label(*rs_, t) + " (k = " + show(t.k) + ")");
    if (!((t.k / prod).real() > 0.0)) v.add("k ∉ ω₊ω₋ℂ₊" + root_label(*rs_, t) + " (k = " + show(t.k) + ")");
  }
  return v.result();
}

std::optional<std::string> ParameterPoint::modular_violation() const {
  const Complex ratio = qp_.wplus() / qp_.wminus();
  if (!(ratio.imag() > 0.0)) return "ω₊/ω₋ ∉ ℍ₊ (Im(ω₊/ω₋) = " + std::to_string(ratio.imag()) + ")";
  return std::nullopt;
}

std::optional<std::string> ParameterPoint::s_prime_violation() const {
  Violations v;
  if (!(qp_.wplus().imag() < 0.0)) v.add("ω₊ ∉ ℍ₋");
  if (!(qp_.wminus().imag() < 0.0)) v.add("ω₋ ∉ ℍ₋");
  if (auto m = modular_violation()) v.add(*m);
  for (const auto& t : terms_) {
    if (!(t.k.real() < 0.0)) v.add("k ∉ ℂ₋" + root_label(*rs_, t) + " (k = " + show(t.k) + ")");
    if (!((t.k / qp_.wplus()).real() > 0.0)) v.add("k ∉ ω₊ℂ₊" + root_label(*rs_, t) + " (k = " + show(t.k) + ")");
    if (!(((t.k + qp_.wplus()) / qp_.wminus()).imag() > 0.0)) {
      v.add("k ∉ ω₋ℍ₊ − ω₊" + root_label(*rs_, t) + " (k = " + show(t.k) + ")");
    }
  }
  return v.result();
}

Complex ParameterPoint::q_alpha(const RootTerm& t) const {
  return std::exp(2.0 * kPi * kI * qp_.wplus() / (t.u * qp_.wminus()));
}

Complex ParameterPoint::qtilde_alpha(const RootTerm& t) const { return qtilde_power(t, 1.0); }

Complex ParameterPoint::t_alpha(const RootTerm& t) const {
  return std::exp(-2.0 * kPi * kI * t.k / (t.u * qp_.wminus()));
}

Complex ParameterPoint::ttilde_alpha(const RootTerm& t) const {
  return std::exp(-2.0 * kPi * kI * t.k / qp_.wplus());
}

Complex ParameterPoint::qtilde_power(const RootTerm& t, Complex z) const {
  return std::exp(-2.0 * kPi * kI * t.u * qp_.wminus() * z / qp_.wplus());
}

void require_S(const ParameterPoint& pp) {
  if (auto v = pp.s_violation()) fail(ErrorKind::NotInS, "parameters not in S: " + *v);
}

void require_S_prime(const ParameterPoint& pp) {
  if (auto v = pp.s_prime_violation()) fail(ErrorKind::NotInSPrime, "parameters not in S': " + *v);
}

namespace {

void require_modular(const ParameterPoint& pp) {
  if (auto v = pp.modular_violation()) fail(ErrorKind::NotInSPrime, "parameters not in S': " + *v);
}

void require_dimension(const RootSystemData& rs, Eigen::Index size) {
  if (size != rs.ambient_dim) {
    fail(ErrorKind::DimensionMismatch, "vector of dimension " + std::to_string(size) + " for " +
                                           rs.name() + " (ambient dimension " +
                                           std::to_string(rs.ambient_dim) + ")");
  }
}

}  // namespace

Complex integrand_I(const ParameterPoint& pp, const Eigen::VectorXcd& v, const QuadratureSpec& spec) {
  require_dimension(pp.rs(), v.size());
  Complex total{0.0, 0.0};
  for (const auto& t : pp.terms()) {
    const QuasiPeriods qa = pp.qp_alpha(t);
    const Complex x = pairing(t.alpha_prime.cast<Complex>(), v);
    for (const Complex y : {x, -x}) {
      total += log_G(qa, y + kI * t.omega_alpha, spec) - log_G(qa, y + kI * (t.k + t.omega_alpha), spec);
    }
  }
  return std::exp(total);
}

Complex integrand_I_alt(const ParameterPoint& pp, const Eigen::VectorXcd& v,
                        const QuadratureSpec& spec) {
  require_dimension(pp.rs(), v.size());
  Complex total{0.0, 0.0};
  for (const auto& t : pp.terms()) {
    const QuasiPeriods qa = pp.qp_alpha(t);
    const Complex x = pairing(t.alpha_prime.cast<Complex>(), v);
    const Complex plain = pairing(t.alpha.cast<Complex>(), v);
    total += log_two_sinh(kPi * x / pp.qp().wplus()) + log_two_sinh(kPi * plain / pp.qp().wminus());
    if (is_neg_inf(total)) return {0.0, 0.0};
    const Complex shift = -kI * (t.k + t.omega_alpha);
    total += log_G(qa, x + shift, spec) + log_G(qa, -x + shift, spec);
  }
  return std::exp(total);
}

TabulatedIntegrand::TabulatedIntegrand(const ParameterPoint& pp, double half_width, double tolerance)
    : pp_(&pp) {
  std::map<bool, std::shared_ptr<const GammaLine>> by_length;
  for (const auto& t : pp.terms()) {
    auto it = by_length.find(t.short_root);
    if (it == by_length.end()) {
      auto line = std::make_shared<const GammaLine>(pp.qp_alpha(t), -kI * (t.k + t.omega_alpha),
                                                    half_width, tolerance);
      it = by_length.emplace(t.short_root, line).first;
    }
    lines_.push_back(it->second);
  }
}

Complex TabulatedIntegrand::operator()(const Eigen::VectorXd& v) const {
  Complex total{0.0, 0.0};
  const auto& terms = pp_->terms();
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const auto& t = terms[j];
    const double x = t.alpha_prime.dot(v);
    const double plain = t.alpha.dot(v);
    total += log_two_sinh(kPi * x / pp_->qp().wplus()) + log_two_sinh(kPi * plain / pp_->qp().wminus());
    if (is_neg_inf(total)) return {0.0, 0.0};
    total += lines_[j]->log_value(x) + lines_[j]->log_value(-x);
  }
  return std::exp(total);
}

long TabulatedIntegrand::direct_evaluations() const {
  std::set<const GammaLine*> seen;
  long n = 0;
  for (const auto& l : lines_) {
    if (seen.insert(l.get()).second) n += l->direct_evaluations();
  }
  return n;
}

Complex density_Delta(const ParameterPoint& pp, const Eigen::VectorXd& v, double eps) {
  require_modular(pp);
  require_dimension(pp.rs(), v.size());
  Complex total{0.0, 0.0};
  for (const auto& t : pp.terms()) {
    const Complex q = pp.q_alpha(t);
    const Complex tt = pp.t_alpha(t);
    const double x = t.alpha.dot(v);
    for (const double y : {x, -x}) {
      const Complex e = std::exp(2.0 * kPi * kI * y);
      const Complex num = log_qpoch(e, q, eps);
      if (is_neg_inf(num)) return {0.0, 0.0};
      const Complex den = log_qpoch(tt * e, q, eps);
      if (is_neg_inf(den)) fail(ErrorKind::NearSingularity, "density has a pole at this v");
      total += num - den;
    }
  }
  return std::exp(total);
}

Complex density_DeltaTilde(const ParameterPoint& pp, const Eigen::VectorXd& v, double eps) {
  require_modular(pp);
  require_dimension(pp.rs(), v.size());
  Complex total{0.0, 0.0};
  for (const auto& t : pp.terms()) {
    const double x = t.alpha.dot(v);
    if (std::abs(x - std::round(x)) < kRootTol) {
      fail(ErrorKind::IntegralityViolation, "<alpha, v> = " + std::to_string(x) + " is an integer");
    }
    const Complex q = pp.qtilde_alpha(t);
    const Complex tt = pp.ttilde_alpha(t);
    for (const double y : {x, -x}) {
      const Complex base = pp.qtilde_power(t, 1.0 + y);
      const Complex den = log_qpoch(base, q, eps);
      if (is_neg_inf(den)) fail(ErrorKind::IntegralityViolation, "density has a pole at this v");
      const Complex num = log_qpoch(tt * base, q, eps);
      if (is_neg_inf(num)) return {0.0, 0.0};
      total += num - den;
    }
  }
  return std::exp(total);
}

Complex constant_K(const ParameterPoint& pp) {
  const Complex prod = pp.qp().wplus() * pp.qp().wminus();
  Complex total{0.0, 0.0};
  for (const auto& t : pp.terms()) {
    total += -kPi * kI * t.k * (t.k + 2.0 * t.omega_alpha) / (t.u * prod);
  }
  return std::exp(total);
}

namespace {

Complex rho_coroot(const ParameterPoint& pp, const RootTerm& t) {
  return pairing(pp.rho(), t.coroot.cast<Complex>());
}

}  // namespace

Complex rhs_CMalternative(const ParameterPoint& pp, const QuadratureSpec& spec) {
  const auto& rs = pp.rs();
  const Complex wm = pp.qp().wminus();
  Complex total = std::log(static_cast<double>(rs.index_f)) + static_cast<double>(rs.rank) * std::log(wm);
  for (const auto& t : pp.terms()) {
    const QuasiPeriods qa = pp.qp_alpha(t);
    const Complex r = rho_coroot(pp, t);
    const double delta = t.simple ? 1.0 : 0.0;
    total += log_G(qa, kI * (r + t.omega_alpha), spec) + log_G(qa, kI * (r - t.omega_alpha), spec) -
             log_G(qa, kI * (r + t.k + t.omega_alpha), spec) -
             log_G(qa, kI * (r - t.k + t.u * wm * delta - t.omega_alpha), spec);
  }
  return std::exp(total);
}

Complex rhs_thm(const ParameterPoint& pp, const QuadratureSpec& spec) {
  const auto& rs = pp.rs();
  const Complex prod = pp.qp().wplus() * pp.qp().wminus();
  Complex value = static_cast<double>(rs.index_f) * static_cast<double>(rs.weyl_order);
  for (const auto& t : pp.terms()) {
    if (t.simple) value *= std::sqrt(prod / t.u);
  }
  Complex total{0.0, 0.0};
  for (const auto& t : pp.terms()) {
    const QuasiPeriods qa = pp.qp_alpha(t);
    const Complex r = rho_coroot(pp, t);
    total += log_G(qa, kI * (r + t.omega_alpha), spec) + log_G(qa, kI * (r - t.omega_alpha), spec) -
             log_G(qa, kI * (r + t.k + t.omega_alpha), spec);
    if (!t.simple) total -= log_G(qa, kI * (r - t.k - t.omega_alpha), spec);
  }
  return value * std::exp(total);
}

Complex macdonald_N(const ParameterPoint& pp, double eps) {
  require_modular(pp);
  const Complex wm = pp.qp().wminus();
  Complex total = std::log(static_cast<double>(pp.rs().weyl_order));
  for (const auto& t : pp.terms()) {
    const Complex q = pp.q_alpha(t);
    const Complex tt = pp.t_alpha(t);
    const Complex x = std::exp(-2.0 * kPi * kI * rho_coroot(pp, t) / (t.u * wm));
    const Complex num = log_qpoch(x, q, eps) + log_qpoch(q * x, q, eps);
    if (is_neg_inf(num)) return {0.0, 0.0};
    const Complex den = log_qpoch(tt * x, q, eps) + log_qpoch(q * x / tt, q, eps);
    if (is_neg_inf(den)) fail(ErrorKind::NearSingularity, "denominator of N vanishes");
    total += num - den;
  }
  return std::exp(total);
}

Complex macdonald_Ntilde(const ParameterPoint& pp, double eps) {
  require_modular(pp);
  const Complex wp = pp.qp().wplus();
  Complex total = std::log(static_cast<double>(pp.rs().index_f));
  for (const auto& t : pp.terms()) {
    const Complex q = pp.qtilde_alpha(t);
    const Complex tt = pp.ttilde_alpha(t);
    const Complex y = std::exp(-2.0 * kPi * kI * rho_coroot(pp, t) / wp);
    const Complex q_delta = t.simple ? q : Complex{1.0, 0.0};
    const Complex num = log_qpoch(q * tt * y, q, eps) + log_qpoch(q_delta * y / tt, q, eps);
    if (is_neg_inf(num)) return {0.0, 0.0};
    const Complex den = log_qpoch(q * y, q, eps) + log_qpoch(y, q, eps);
    if (is_neg_inf(den)) fail(ErrorKind::NearSingularity, "denominator of Ntilde vanishes");
    total += num - den;
  }
  return std::exp(total);
}

BCParameters::BCParameters(QuasiPeriods qp, std::array<Complex, 4> gamma, Complex kappa, int rank)
    : qp_(qp), gamma_(gamma), kappa_(kappa), rank_(rank) {
  if (rank < 1) fail(ErrorKind::InvalidArgument, "BC rank must be positive");
  for (const auto& g : gamma) {
    if (!is_finite(g)) fail(ErrorKind::InvalidArgument, "gamma parameters must be finite");
  }
  if (!is_finite(kappa)) fail(ErrorKind::InvalidArgument, "kappa must be finite");
}

std::optional<std::string> BCParameters::sbc_violation() const {
  Violations v;
  const Complex prod = qp_.wplus() * qp_.wminus();
  if (!(prod.imag() < 0.0)) v.add("ω₊ω₋ ∉ ℍ₋ (Im(ω₊ω₋) = " + std::to_string(prod.imag()) + ")");
  for (int r = 0; r < 4; ++r) {
    if (!(gamma_[r].real() < 0.0)) {
      v.add("γ" + std::to_string(r + 1) + " ∉ ℂ₋ (γ" + std::to_string(r + 1) + " = " + show(gamma_[r]) + ")");
    }
  }
  if (!(((qp_.wplus() + qp_.wminus() + gamma_sum()) / prod).real() > 0.0)) v.add("ω₊+ω₋+|γ| ∉ ω₊ω₋ℂ₊");
  if (rank_ > 1) {
    if (!(kappa_.real() < 0.0)) v.add("κ ∉ ℂ₋ (κ = " + show(kappa_) + ")");
    if (!((kappa_ / prod).real() > 0.0)) v.add("κ ∉ ω₊ω₋ℂ₊ (κ = " + show(kappa_) + ")");
  }
  return v.result();
}

void require_S_BC(const BCParameters& bp) {
  if (auto v = bp.sbc_violation()) fail(ErrorKind::NotInSBC, "parameters not in S_BC: " + *v);
}

namespace {

void require_bc_dimension(const BCParameters& bp, Eigen::Index size) {
  if (size != bp.rank()) {
    fail(ErrorKind::DimensionMismatch, "BC integrand of rank " + std::to_string(bp.rank()) +
                                           " evaluated at a vector of dimension " + std::to_string(size));
  }
}

}  // namespace

Complex bc_integrand(const BCParameters& bp, const Eigen::VectorXd& v, const QuadratureSpec& spec) {
  require_bc_dimension(bp, v.size());
  const auto& qp = bp.qp();
  const Complex wp = qp.wplus(), wm = qp.wminus(), w = qp.omega();
  const int n = bp.rank();
  Complex total{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    const double x = v[j];
    // G(2x + i w) G(-2x + i w) = 4 sinh(2 pi x / w+) sinh(2 pi x / w-).
    total += log_two_sinh(2.0 * kPi * x / wp) + log_two_sinh(2.0 * kPi * x / wm);
    if (is_neg_inf(total)) return {0.0, 0.0};
    for (const Complex g : bp.gamma()) {
      const Complex shift = -kI * (w + g);
      total += log_G(qp, x + shift, spec) + log_G(qp, -x + shift, spec);
    }
  }
  const Complex shift = -kI * (w + bp.kappa());
  for (int r = 0; r < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      for (const double y : {v[r] + v[s], v[r] - v[s]}) {
        total += log_two_sinh(kPi * y / wp) + log_two_sinh(kPi * y / wm);
        if (is_neg_inf(total)) return {0.0, 0.0};
        total += log_G(qp, y + shift, spec) + log_G(qp, -y + shift, spec);
      }
    }
  }
  return std::exp(total);
}

Complex bc_integrand_literal(const BCParameters& bp, const Eigen::VectorXd& v,
                             const QuadratureSpec& spec) {
  require_bc_dimension(bp, v.size());
  const auto& qp = bp.qp();
  const Complex wp = qp.wplus(), wm = qp.wminus(), w = qp.omega();
  const int n = bp.rank();
  Complex total{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    for (const double x : {v[j], -v[j]}) {
      total += log_G(qp, x + kI * w, spec) + log_G(qp, x + 0.5 * kI * wp, spec) +
               log_G(qp, x + 0.5 * kI * wm, spec);
      for (const Complex g : bp.gamma()) total -= log_G(qp, x + kI * (w + g), spec);
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      for (const double y : {v[r] + v[s], v[r] - v[s], -v[r] + v[s], -v[r] - v[s]}) {
        total += log_G(qp, y + kI * w, spec) - log_G(qp, y + kI * (w + bp.kappa()), spec);
      }
    }
  }
  return std::exp(total);
}

TabulatedBCIntegrand::TabulatedBCIntegrand(const BCParameters& bp, double half_width, double tolerance)
    : bp_(&bp) {
  const Complex w = bp.qp().omega();
  for (int r = 0; r < 4; ++r) {
    short_lines_[r] = std::make_shared<const GammaLine>(bp.qp(), -kI * (w + bp.gamma()[r]), half_width,
                                                        tolerance);
  }
  if (bp.rank() > 1) {
    long_line_ = std::make_shared<const GammaLine>(bp.qp(), -kI * (w + bp.kappa()), 2.0 * half_width,
                                                   tolerance);
  }
}

Complex TabulatedBCIntegrand::operator()(const Eigen::VectorXd& v) const {
  require_bc_dimension(*bp_, v.size());
  const Complex wp = bp_->qp().wplus(), wm = bp_->qp().wminus();
  const int n = bp_->rank();
  Complex total{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    const double x = v[j];
    total += log_two_sinh(2.0 * kPi * x / wp) + log_two_sinh(2.0 * kPi * x / wm);
    if (is_neg_inf(total)) return {0.0, 0.0};
    for (const auto& line : short_lines_) total += line->log_value(x) + line->log_value(-x);
  }
  for (int r = 0; r < n; ++r) {
    for (int s = r + 1; s < n; ++s) {
      for (const double y : {v[r] + v[s], v[r] - v[s]}) {
        total += log_two_sinh(kPi * y / wp) + log_two_sinh(kPi * y / wm);
        if (is_neg_inf(total)) return {0.0, 0.0};
        total += long_line_->log_value(y) + long_line_->log_value(-y);
      }
    }
  }
  return std::exp(total);
}

long TabulatedBCIntegrand::direct_evaluations() const {
  long n = long_line_ ? long_line_->direct_evaluations() : 0;
  for (const auto& l : short_lines_) n += l->direct_evaluations();
  return n;
}

Complex bc_rhs(const BCParameters& bp, const QuadratureSpec& spec) {
  const auto& qp = bp.qp();
  const Complex w = qp.omega();
  const Complex kappa = bp.kappa();
  const Complex gsum = bp.gamma_sum();
  const auto& g = bp.gamma();
  const int n = bp.rank();
  double factorial = 1.0;
  for (int j = 2; j <= n; ++j) factorial *= j;
  Complex total = std::log(std::pow(2.0, n) * factorial) +
                  static_cast<double>(n) * std::log(std::sqrt(qp.wplus() * qp.wminus()));
  for (int j = 0; j < n; ++j) {
    total += log_G(qp, kI * (w + kappa), spec) +
             log_G(qp, kI * (w + static_cast<double>(2 * n - j - 2) * kappa + gsum), spec) -
             log_G(qp, kI * (w + static_cast<double>(j + 1) * kappa), spec);
    for (int r = 0; r < 4; ++r) {
      for (int s = r + 1; s < 4; ++s) {
        total -= log_G(qp, kI * (w + static_cast<double>(j) * kappa + g[r] + g[s]), spec);
      }
    }
  }
  return std::exp(total);
}

Complex a1_closed_form(const QuasiPeriods& qp, Complex k, const QuadratureSpec& spec) {
  const Complex w = qp.omega();
  return 4.0 * std::sqrt(qp.wplus() * qp.wminus()) *
         std::exp(log_G(qp, kI * (k + w), spec) + log_G(qp, kI * (k - w), spec) - log_G(qp, kI * (2.0 * k + w), spec));
}

BCSpecialization bc_specialize(const ParameterPoint& pp) {
  require_S(pp);
  const auto& rs = pp.rs();
  const Complex wp = pp.qp().wplus(), wm = pp.qp().wminus(), w = pp.qp().omega();
  const Complex ks = pp.k().value_short, kl = pp.k().value_long;
  const bool case_one = pp.identity_case() == IdentityCase::I;
  auto finish = [&](BCSpecialization s) {
    if (auto v = s.params.sbc_violation()) {
      fail(ErrorKind::NotInSBC, "specialized parameters not in S_BC: " + *v);
    }
    return s;
  };
  if (rs.family == Family::A && rs.rank == 1) {
    if (!case_one) {
      fail(ErrorKind::UnsupportedCombination, "A1 reduces to the BC integral in case i only");
    }
    return finish({BCParameters(pp.qp(), {ks, -0.5 * wp, -0.5 * wm, -w}, ks, 1), 1.0,
                   "quasi-periods unchanged, v' = sqrt(2) v"});
  }
  if (rs.family == Family::B) {
    if (case_one) {
      return finish({BCParameters(pp.qp(), {ks, -0.5 * wp, -0.5 * wm, -w}, kl, rs.rank), 1.0,
                     "quasi-periods unchanged, v' = sqrt(2) v"});
    }
    return finish({BCParameters(QuasiPeriods(2.0 * wp, wm), {ks, ks - wp, -0.5 * wm, -wp - 0.5 * wm},
                                2.0 * kl, rs.rank),
                   1.0, "quasi-periods (2 w+, w-), v' = sqrt(2) v"});
  }
  if (rs.family == Family::C) {
    if (case_one) {
      return finish({BCParameters(pp.qp(),
                                  {0.5 * kl, 0.5 * kl - 0.5 * wp, 0.5 * kl - 0.5 * wm, 0.5 * kl - w},
                                  ks, rs.rank),
                     2.0, "quasi-periods unchanged, d'v = dv / 2"});
    }
    return finish({BCParameters(pp.qp(), {kl, kl - 0.5 * wm, -0.5 * wp, -w}, ks, rs.rank), 2.0,
                   "quasi-periods unchanged, d'v = dv / 2"});
  }
  fail(ErrorKind::UnsupportedCombination, "no BC specialization for " + rs.name());
}

}  // namespace hyperct
