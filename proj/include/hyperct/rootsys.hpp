#pragma once

// Irreducible reduced root systems normalized so that short roots have
// squared length 2, together with their (co)weight lattices.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyperct/complex.hpp"

namespace hyperct {

enum class Family { A, B, C, D, G };

std::string to_string(Family family);
Family parse_family(const std::string& text);

enum class IdentityCase { I, II };

std::string to_string(IdentityCase c);
IdentityCase parse_case(const std::string& text);

inline constexpr double kRootTol = 1e-12;

struct RootSystemData {
  Family family = Family::A;
  int rank = 0;
  int ambient_dim = 0;
  std::vector<Eigen::VectorXd> roots;  // positive roots first, then their negatives
  std::vector<Eigen::VectorXd> positive_roots;
  std::vector<Eigen::VectorXd> simple_roots;
  std::vector<Eigen::VectorXd> fundamental_weights;
  std::vector<Eigen::VectorXd> fundamental_coweights;
  Eigen::MatrixXi cartan;  // a_ij = <alpha_i, alpha_j^vee>
  long weyl_order = 0;
  int index_f = 0;
  double coweight_jacobian = 0.0;

  std::string name() const;
  bool is_short(const Eigen::VectorXd& alpha) const { return std::abs(alpha.squaredNorm() - 2.0) < 1e-9; }
  // Index of alpha in roots, or -1.
  int find_root(const Eigen::VectorXd& alpha) const;
  bool is_simple(const Eigen::VectorXd& alpha) const;
  bool simply_laced() const;
};

// Multiplicity function, stored once per root length.
struct Multiplicity {
  Complex value_short{0.0, 0.0};
  Complex value_long{0.0, 0.0};

  static Multiplicity uniform(Complex k) { return {k, k}; }
  Complex at(const RootSystemData& rs, const Eigen::VectorXd& alpha) const {
    return rs.is_short(alpha) ? value_short : value_long;
  }
};

// Supported: (A, n>=1), (B, n>=2), (C, n>=2), (D, n>=4), (G, 2).
RootSystemData build(Family family, int rank);

// Shared immutable instance, cached per (family, rank).
std::shared_ptr<const RootSystemData> build_shared(Family family, int rank);

// Half sum of k_alpha * alpha over positive roots.
Eigen::VectorXcd rho_k(const RootSystemData& rs, const Multiplicity& k);
// sum_j k_{alpha_j} * omega_j.
Eigen::VectorXcd rho_k_from_weights(const RootSystemData& rs, const Multiplicity& k);

// Complex bilinear form sum x_i y_i (no conjugation).
Complex pairing(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

Eigen::VectorXd coroot(const Eigen::VectorXd& alpha);

// s_alpha(v) = v - <v, alpha^vee> alpha.
Eigen::VectorXd reflect(const Eigen::VectorXd& v, const Eigen::VectorXd& alpha);

// Orbit of v under the group generated by the simple reflections.
std::vector<Eigen::VectorXd> weyl_orbit(const RootSystemData& rs, const Eigen::VectorXd& v,
                                        std::size_t limit = 100000);

// Points sum_j m_j * omega_j^vee with every |m_j| <= radius.
std::vector<Eigen::VectorXd> coweight_lattice_points(const RootSystemData& rs, int radius);

// (u_alpha, u_alpha * alpha) for the chosen identity case.
std::pair<double, Eigen::VectorXd> u_and_prime(const RootSystemData& rs, IdentityCase c,
                                               const Eigen::VectorXd& alpha);

}  // namespace hyperct
