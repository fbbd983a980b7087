#pragma once

// End-to-end numerical checks of each identity, producing structured reports.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperct/errors.hpp"
#include "hyperct/identities.hpp"

namespace hyperct {

struct VerificationReport {
  std::string identity;
  nlohmann::json params = nlohmann::json::object();
  Complex lhs{0.0, 0.0};
  Complex rhs{0.0, 0.0};
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  bool passed = false;
  nlohmann::json diagnostics = nlohmann::json::object();
  double wall_ms = 0.0;
  // Set when the check could not run; the kind is also in diagnostics.
  std::optional<ErrorKind> error;
};

// Fills abs_err, rel_err and passed from lhs, rhs and tol.
void grade(VerificationReport& report);

// Default tolerance of the hyperbolic check by rank.
double default_hyperbolic_tol(int rank);

VerificationReport verify_hyperbolic_ct(const ParameterPoint& pp, const QuadratureSpec& spec = {},
                                        double tol = 0.0, std::uint64_t seed = 1);

VerificationReport verify_q_constant_term(const ParameterPoint& pp, int grid = 64, double tol = 1e-7);

// base_lambda holds coweight coordinates of the base point; empty picks a
// default away from the integrality walls.
VerificationReport verify_q_sum(const ParameterPoint& pp, std::vector<double> base_lambda = {},
                                double tail_tol = 1e-16, double tol = 1e-7);

VerificationReport verify_split(const ParameterPoint& pp, int count = 100, std::uint64_t seed = 1,
                                double tol = 1e-8);

VerificationReport verify_shintani(const QuasiPeriods& qp, int count = 100, std::uint64_t seed = 1,
                                   double tol = 1e-10);

VerificationReport verify_bc(const BCParameters& bp, const QuadratureSpec& spec = {}, double tol = 0.0);

// Specializes pp to the BC integral, then compares prefactor * J_BC with the
// hyperbolic integral over V. Diagnostics carry both closed forms.
VerificationReport verify_bc_specialization(const ParameterPoint& pp, const QuadratureSpec& spec = {},
                                            double tol = 0.0);

// (i w-)^n K N Ntilde against #W times the closed form of the hyperbolic
// integral. No quadrature is involved.
VerificationReport verify_closed_form_chain(const ParameterPoint& pp, double tol = 1e-8);

enum class Identity { Hyperbolic, QConstantTerm, QSum, Split, Shintani, BC, Chain };

std::string to_string(Identity id);
Identity parse_identity(const std::string& text);

// One verification request. Fields irrelevant to the identity are ignored.
struct PointSpec {
  Identity identity = Identity::Hyperbolic;
  Family family = Family::A;
  int rank = 1;
  IdentityCase identity_case = IdentityCase::I;
  Complex omega_plus{1.0, 0.0};
  Complex omega_minus{1.0, 0.0};
  Complex k_short{-1.0, 0.0};
  Complex k_long{-1.0, 0.0};
  std::array<Complex, 4> gamma{};
  Complex kappa{-1.0, 0.0};
  bool specialize = false;  // bc: derive the parameters from the root-system point
  double tol = 0.0;         // 0 picks the identity's default
  QuadratureSpec spec;
  int grid = 64;
  int count = 100;
  std::uint64_t seed = 1;
  std::vector<double> base;
  double tail_tol = 1e-16;

  bool operator==(const PointSpec&) const = default;
};

// "RE,IM" with decimal literals and no spaces.
Complex parse_complex(const std::string& text);
// Shortest text that reads back to the same doubles.
std::string format_complex(Complex z);
// 17 significant digits.
std::string format_double(double x);

// Canonical JSON form of a point; from_json accepts the same keys on top
// of a defaults object and rejects unknown keys with InvalidArgument.
nlohmann::json to_json(const PointSpec& p);
PointSpec point_from_json(const nlohmann::json& j, const PointSpec& defaults = {});

// Parses {"defaults": {...}, "points": [...]}.
std::vector<PointSpec> parse_sweep_config(const nlohmann::json& config);

// Runs one point; library errors are captured in the report.
VerificationReport run_point(const PointSpec& p);

// Runs every point, concurrently when workers allow; output keeps input order.
std::vector<VerificationReport> sweep(const std::vector<PointSpec>& points);

// Report JSON with exactly the public fields.
nlohmann::json to_json(const VerificationReport& r);
// Indented JSON text with every double at 17 significant digits and
// non-finite doubles as null.
std::string dump_json(const nlohmann::json& j);
// Serializes with 17 significant digits for every double.
std::string dump_reports(const std::vector<VerificationReport>& reports);

}  // namespace hyperct
