#include "hyperct/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>

#include "hyperct/errors.hpp"

namespace hyperct {

std::string to_string(Family family) {
  switch (family) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::G: return "G";
  }
  return "?";
}

Family parse_family(const std::string& text) {
  if (text == "A") return Family::A;
  if (text == "B") return Family::B;
  if (text == "C") return Family::C;
  if (text == "D") return Family::D;
  if (text == "G") return Family::G;
  fail(ErrorKind::UnsupportedFamily, "unknown root system family '" + text + "'");
}

std::string to_string(IdentityCase c) { return c == IdentityCase::I ? "i" : "ii"; }

IdentityCase parse_case(const std::string& text) {
  if (text == "i" || text == "I" || text == "1") return IdentityCase::I;
  if (text == "ii" || text == "II" || text == "2") return IdentityCase::II;
  fail(ErrorKind::InvalidArgument, "case must be 'i' or 'ii', got '" + text + "'");
}

std::string RootSystemData::name() const { return to_string(family) + std::to_string(rank); }

int RootSystemData::find_root(const Eigen::VectorXd& alpha) const {
  if (alpha.size() != ambient_dim) return -1;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if ((roots[i] - alpha).norm() < 1e-9) return static_cast<int>(i);
  }
  return -1;
}

bool RootSystemData::is_simple(const Eigen::VectorXd& alpha) const {
  return std::any_of(simple_roots.begin(), simple_roots.end(),
                     [&](const Eigen::VectorXd& s) { return (s - alpha).norm() < 1e-9; });
}

bool RootSystemData::simply_laced() const {
  return std::all_of(roots.begin(), roots.end(), [&](const Eigen::VectorXd& a) { return is_short(a); });
}

Eigen::VectorXd coroot(const Eigen::VectorXd& alpha) {
  const double n2 = alpha.squaredNorm();
  if (!(n2 > 0.0)) fail(ErrorKind::ZeroVector, "coroot of the zero vector");
  return 2.0 * alpha / n2;
}

Eigen::VectorXd reflect(const Eigen::VectorXd& v, const Eigen::VectorXd& alpha) {
  return v - v.dot(coroot(alpha)) * alpha;
}

namespace {

// Key for deduplicating vectors whose entries are exact combinations of
// integers and sqrt(2).
std::vector<long long> vector_key(const Eigen::VectorXd& v) {
  std::vector<long long> key(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) key[i] = std::llround(v[i] * 1e8);
  return key;
}

Eigen::VectorXd unit(int dim, int i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e[i] = 1.0;
  return e;
}

std::vector<Eigen::VectorXd> simple_roots_for(Family family, int rank, int& ambient) {
  std::vector<Eigen::VectorXd> simple;
  const double r2 = std::sqrt(2.0);
  switch (family) {
    case Family::A:
      ambient = rank + 1;
      for (int i = 0; i < rank; ++i) simple.push_back(unit(ambient, i) - unit(ambient, i + 1));
      break;
    case Family::B:
      ambient = rank;
      for (int i = 0; i + 1 < rank; ++i) simple.push_back(r2 * (unit(ambient, i) - unit(ambient, i + 1)));
      simple.push_back(r2 * unit(ambient, rank - 1));
      break;
    case Family::C:
      ambient = rank;
      for (int i = 0; i + 1 < rank; ++i) simple.push_back(unit(ambient, i) - unit(ambient, i + 1));
      simple.push_back(2.0 * unit(ambient, rank - 1));
      break;
    case Family::D:
      ambient = rank;
      for (int i = 0; i + 1 < rank; ++i) simple.push_back(unit(ambient, i) - unit(ambient, i + 1));
      simple.push_back(unit(ambient, rank - 2) + unit(ambient, rank - 1));
      break;
    case Family::G:
      ambient = 3;
      simple.push_back(unit(3, 0) - unit(3, 1));
      simple.push_back(-2.0 * unit(3, 0) + unit(3, 1) + unit(3, 2));
      break;
  }
  return simple;
}

long weyl_order_formula(Family family, int rank) {
  long factorial = 1;
  for (int i = 2; i <= rank; ++i) factorial *= i;
  switch (family) {
    case Family::A: return factorial * (rank + 1);
    case Family::B:
    case Family::C: return factorial * (1L << rank);
    case Family::D: return factorial * (1L << (rank - 1));
    case Family::G: return 12;
  }
  return 0;
}

// Columns X with <x_i, rows_j> = delta_ij, inside the span of the rows.
std::vector<Eigen::VectorXd> dual_basis(const std::vector<Eigen::VectorXd>& rows) {
  const int n = static_cast<int>(rows.size());
  const int d = static_cast<int>(rows[0].size());
  Eigen::MatrixXd s(n, d);
  for (int i = 0; i < n; ++i) s.row(i) = rows[i].transpose();
  const Eigen::MatrixXd gram = s * s.transpose();
  const Eigen::MatrixXd x = s.transpose() * gram.inverse();
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < n; ++i) out.push_back(x.col(i));
  return out;
}

}  // namespace

RootSystemData build(Family family, int rank) {
  const bool supported = (family == Family::A && rank >= 1) || (family == Family::B && rank >= 2) ||
                         (family == Family::C && rank >= 2) || (family == Family::D && rank >= 4) ||
                         (family == Family::G && rank == 2);
  if (!supported || rank > 8) {
    fail(ErrorKind::UnsupportedFamily, "root system " + to_string(family) + std::to_string(rank) +
                                           " is not supported (A>=1, B>=2, C>=2, D>=4, G2; rank <= 8)");
  }
  RootSystemData rs;
  rs.family = family;
  rs.rank = rank;
  rs.simple_roots = simple_roots_for(family, rank, rs.ambient_dim);

  // All roots: closure of the simple roots under simple reflections.
  std::set<std::vector<long long>> seen;
  std::vector<Eigen::VectorXd> all;
  std::vector<Eigen::VectorXd> frontier = rs.simple_roots;
  for (const auto& a : frontier) {
    seen.insert(vector_key(a));
    all.push_back(a);
  }
  while (!frontier.empty()) {
    std::vector<Eigen::VectorXd> next;
    for (const auto& v : frontier) {
      for (const auto& s : rs.simple_roots) {
        Eigen::VectorXd w = reflect(v, s);
        if (seen.insert(vector_key(w)).second) {
          all.push_back(w);
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }

  // Positive roots: non-negative coordinates in the simple-root basis.
  const auto coweights = dual_basis(rs.simple_roots);
  struct Ranked {
    Eigen::VectorXd root;
    std::vector<double> coords;
    double height;
  };
  std::vector<Ranked> positives;
  for (const auto& a : all) {
    std::vector<double> coords(rank);
    double height = 0.0;
    bool positive = true;
    for (int j = 0; j < rank; ++j) {
      coords[j] = a.dot(coweights[j]);
      height += coords[j];
      if (coords[j] < -1e-9) positive = false;
    }
    if (positive) positives.push_back({a, coords, height});
  }
  std::sort(positives.begin(), positives.end(), [](const Ranked& x, const Ranked& y) {
    if (std::abs(x.height - y.height) > 1e-9) return x.height < y.height;
    for (std::size_t j = 0; j < x.coords.size(); ++j) {
      if (std::abs(x.coords[j] - y.coords[j]) > 1e-9) return x.coords[j] > y.coords[j];
    }
    return false;
  });
  for (const auto& p : positives) rs.positive_roots.push_back(p.root);
  rs.roots = rs.positive_roots;
  for (const auto& p : rs.positive_roots) rs.roots.push_back(-p);

  rs.cartan.resize(rank, rank);
  std::vector<Eigen::VectorXd> simple_coroots;
  for (const auto& a : rs.simple_roots) simple_coroots.push_back(coroot(a));
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < rank; ++j) {
      rs.cartan(i, j) = static_cast<int>(std::lround(rs.simple_roots[i].dot(simple_coroots[j])));
    }
  }
  rs.fundamental_coweights = coweights;
  rs.fundamental_weights = dual_basis(simple_coroots);
  rs.weyl_order = weyl_order_formula(family, rank);
  rs.index_f = static_cast<int>(std::lround(std::abs(rs.cartan.cast<double>().determinant())));

  Eigen::MatrixXd cw(rs.ambient_dim, rank);
  for (int j = 0; j < rank; ++j) cw.col(j) = rs.fundamental_coweights[j];
  rs.coweight_jacobian = std::sqrt((cw.transpose() * cw).determinant());
  return rs;
}

std::shared_ptr<const RootSystemData> build_shared(Family family, int rank) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const RootSystemData>> cache;
  const auto key = std::pair{static_cast<int>(family), rank};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto rs = std::make_shared<const RootSystemData>(build(family, rank));
  cache.emplace(key, rs);
  return rs;
}

Eigen::VectorXcd rho_k(const RootSystemData& rs, const Multiplicity& k) {
  Eigen::VectorXcd rho = Eigen::VectorXcd::Zero(rs.ambient_dim);
  for (const auto& a : rs.positive_roots) rho += 0.5 * k.at(rs, a) * a.cast<Complex>();
  return rho;
}

Eigen::VectorXcd rho_k_from_weights(const RootSystemData& rs, const Multiplicity& k) {
  Eigen::VectorXcd rho = Eigen::VectorXcd::Zero(rs.ambient_dim);
  for (int j = 0; j < rs.rank; ++j) {
    rho += k.at(rs, rs.simple_roots[j]) * rs.fundamental_weights[j].cast<Complex>();
  }
  return rho;
}

Complex pairing(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  if (x.size() != y.size()) {
    fail(ErrorKind::DimensionMismatch, "pairing of vectors of dimension " + std::to_string(x.size()) +
                                           " and " + std::to_string(y.size()));
  }
  return (x.array() * y.array()).sum();
}

std::vector<Eigen::VectorXd> weyl_orbit(const RootSystemData& rs, const Eigen::VectorXd& v,
                                        std::size_t limit) {
  std::set<std::vector<long long>> seen{vector_key(v)};
  std::vector<Eigen::VectorXd> orbit{v};
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    for (const auto& s : rs.simple_roots) {
      Eigen::VectorXd w = reflect(orbit[head], s);
      if (seen.insert(vector_key(w)).second) {
        orbit.push_back(w);
        if (orbit.size() > limit) fail(ErrorKind::InvalidArgument, "Weyl orbit exceeds limit");
      }
    }
  }
  return orbit;
}

std::vector<Eigen::VectorXd> coweight_lattice_points(const RootSystemData& rs, int radius) {
  if (radius < 0) fail(ErrorKind::InvalidArgument, "radius must be non-negative");
  const int n = rs.rank;
  std::vector<int> m(n, -radius);
  std::vector<Eigen::VectorXd> points;
  while (true) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(rs.ambient_dim);
    for (int j = 0; j < n; ++j) p += m[j] * rs.fundamental_coweights[j];
    points.push_back(p);
    int d = n - 1;
    while (d >= 0 && ++m[d] > radius) m[d--] = -radius;
    if (d < 0) break;
  }
  return points;
}

std::pair<double, Eigen::VectorXd> u_and_prime(const RootSystemData& rs, IdentityCase c,
                                               const Eigen::VectorXd& alpha) {
  if (rs.find_root(alpha) < 0) fail(ErrorKind::NotARoot, "vector is not a root of " + rs.name());
  if (c == IdentityCase::I) return {1.0, alpha};
  const double u = 2.0 / alpha.squaredNorm();
  return {u, u * alpha};
}

}  // namespace hyperct
