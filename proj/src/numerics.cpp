#include "hyperct/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <random>
#include <string>

#include "hyperct/errors.hpp"
#include "hyperct/parallel.hpp"

namespace hyperct {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) fail(ErrorKind::InvalidArgument, "rel_tol must lie in (0,1)");
  if (!(abs_tol > 0.0 && abs_tol < 1.0)) fail(ErrorKind::InvalidArgument, "abs_tol must lie in (0,1)");
  if (max_subdivisions <= 0) fail(ErrorKind::InvalidArgument, "max_subdivisions must be positive");
  if (!(truncation_safety >= 1.0)) fail(ErrorKind::InvalidArgument, "truncation_safety must be >= 1");
  if (mc_samples <= 0) fail(ErrorKind::InvalidArgument, "mc_samples must be positive");
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  Complex value;
  double error;
  double roundoff;  // part of error that bisection cannot reduce
};

struct SegmentOrder {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

Segment gauss_kronrod_15(const RealFunction1& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex fc = f(center);
  Complex result_k = fc * kWgk[7];
  Complex result_g = fc * kWg[3];
  std::array<Complex, 15> fv;
  fv[7] = fc;
  double abs_k = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Complex f1 = f(center - dx);
    const Complex f2 = f(center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    result_k += kWgk[j] * (f1 + f2);
    abs_k += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) result_g += kWg[j / 2] * (f1 + f2);
  }
  const Complex mean = 0.5 * result_k;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  }
  const double abs_half = std::abs(half);
  asc *= abs_half;
  abs_k *= abs_half;
  double err = std::abs((result_k - result_g) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  const double roundoff = 50.0 * eps * abs_k;
  if (abs_k > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, roundoff);
  return {a, b, result_k * half, err, roundoff};
}

IntegralResult adaptive_gk(const RealFunction1& f, double a, double b, const QuadratureSpec& spec,
                           double extra_tolerance_floor) {
  IntegralResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Segment, std::vector<Segment>, SegmentOrder> heap;
  heap.push(gauss_kronrod_15(f, a, b));
  out.evaluations = 15;
  int splits = 0;
  std::vector<Segment> segs;
  while (true) {
    // Re-sum in interval order so the result does not depend on heap history.
    segs.clear();
    while (!heap.empty()) {
      segs.push_back(heap.top());
      heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    Complex total{0.0, 0.0};
    double total_err = 0.0;
    double total_roundoff = 0.0;
    for (const auto& s : segs) {
      total += s.value;
      total_err += s.error;
      total_roundoff += s.roundoff;
      heap.push(s);
    }
    // Once the estimate is dominated by rounding in the rule sums, further
    // bisection only adds noise; accept at twice the accumulated floor.
    auto target = [&] {
      return std::max({spec.abs_tol, spec.rel_tol * std::abs(total), extra_tolerance_floor,
                       2.0 * total_roundoff});
    };
    out.value = total;
    out.error_estimate = total_err;
    out.converged = total_err <= target();
    if (out.converged || splits >= spec.max_subdivisions) return out;

    bool stuck = false;
    while (total_err > target() && splits < spec.max_subdivisions) {
      Segment worst = heap.top();
      const double mid = 0.5 * (worst.a + worst.b);
      if (mid <= worst.a || mid >= worst.b) {
        stuck = true;
        break;
      }
      heap.pop();
      Segment left = gauss_kronrod_15(f, worst.a, mid);
      Segment right = gauss_kronrod_15(f, mid, worst.b);
      out.evaluations += 30;
      total += left.value + right.value - worst.value;
      total_err += left.error + right.error - worst.error;
      total_roundoff += left.roundoff + right.roundoff - worst.roundoff;
      heap.push(left);
      heap.push(right);
      ++splits;
    }
    if (stuck) {
      splits = spec.max_subdivisions;
    }
  }
}

}  // namespace

IntegralResult integrate_interval(const RealFunction1& f, double a, double b,
                                  const QuadratureSpec& spec) {
  spec.validate();
  IntegralResult r = adaptive_gk(f, a, b, spec, 0.0);
  if (!r.converged) {
    fail(ErrorKind::NonConvergence, "interval quadrature exhausted " +
                                        std::to_string(spec.max_subdivisions) + " subdivisions");
  }
  return r;
}

IntegralResult integrate_halfline(const RealFunction1& f, const QuadratureSpec& spec,
                                  double decay_rate, const HalflineEnds& ends) {
  spec.validate();
  if (!(decay_rate > 0.0) || !std::isfinite(decay_rate)) {
    fail(ErrorKind::InvalidDecay, "decay_rate must be positive, got " + std::to_string(decay_rate));
  }
  const double split = ends.even_series ? ends.split : 0.0;
  if (ends.even_series && !(split > 0.0)) fail(ErrorKind::InvalidArgument, "series split must be positive");

  Complex near{0.0, 0.0};
  if (ends.even_series) {
    const auto& c = *ends.even_series;
    double p = split;
    for (int k = 0; k < 4; ++k) {
      near += c[k] * (p / (2.0 * k + 1.0));
      p *= split * split;
    }
  }

  // exp(-decay * (Y - split)) <= abs_tol / 10, with a mild allowance for
  // integrands carrying a 1/decay prefactor.
  const double budget = spec.abs_tol / 10.0;
  double span = (std::log(1.0 / budget) + std::max(0.0, std::log(1.0 / decay_rate))) / decay_rate;
  span *= spec.truncation_safety;
  const double upper = split + span;

  IntegralResult body = adaptive_gk(f, split, upper, spec, 0.0);
  body.value += near;
  if (ends.tail) body.value += ends.tail(upper);
  if (!body.converged) {
    fail(ErrorKind::NonConvergence, "half-line quadrature exhausted " +
                                        std::to_string(spec.max_subdivisions) + " subdivisions");
  }
  body.error_estimate += budget;
  return body;
}

namespace {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [0,1]
  std::vector<double> weights;  // sum to 1
};

GaussLegendreRule make_gauss_legendre(int order) {
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussLegendreRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_gauss_legendre(order)).first;
  return it->second;
}

constexpr int kCellOrder = 5;

struct Cell {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  Complex value;
  double error = 0.0;
};

Complex tensor_rule(const BoxFunction& f, const Cell& cell, int n, const GaussLegendreRule& rule) {
  const int m = static_cast<int>(rule.nodes.size());
  std::array<int, 3> idx{0, 0, 0};
  std::array<double, 3> x{};
  double volume = 1.0;
  for (int d = 0; d < n; ++d) volume *= cell.hi[d] - cell.lo[d];
  Complex sum{0.0, 0.0};
  while (true) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      x[d] = cell.lo[d] + (cell.hi[d] - cell.lo[d]) * rule.nodes[idx[d]];
      w *= rule.weights[idx[d]];
    }
    sum += w * f(std::span<const double>(x.data(), n));
    int d = 0;
    while (d < n && ++idx[d] == m) idx[d++] = 0;
    if (d == n) break;
  }
  return sum * volume;
}

void evaluate_cell(const BoxFunction& f, Cell& cell, int n) {
  const Complex coarse = tensor_rule(f, cell, n, gauss_legendre(kCellOrder));
  const Complex fine = tensor_rule(f, cell, n, gauss_legendre(2 * kCellOrder));
  cell.value = fine;
  cell.error = std::abs(fine - coarse);
}

long cell_evaluations(int n) {
  long a = 1;
  long b = 1;
  for (int d = 0; d < n; ++d) {
    a *= kCellOrder;
    b *= 2 * kCellOrder;
  }
  return a + b;
}

}  // namespace

IntegralResult integrate_box_nd(const BoxFunction& f, std::span<const double> lower,
                                std::span<const double> upper, const QuadratureSpec& spec) {
  spec.validate();
  if (lower.size() != upper.size() || lower.empty()) {
    fail(ErrorKind::InvalidBox, "box bounds must be non-empty and of equal dimension");
  }
  const int n = static_cast<int>(lower.size());
  if (n > 3) {
    fail(ErrorKind::DimensionTooLarge,
         "deterministic cubature supports n <= 3, got n = " + std::to_string(n) + "; use monte_carlo_box");
  }
  for (int d = 0; d < n; ++d) {
    if (!(upper[d] > lower[d]) || !std::isfinite(lower[d]) || !std::isfinite(upper[d])) {
      fail(ErrorKind::InvalidBox, "box must be finite with upper > lower");
    }
  }

  std::vector<Cell> cells(1);
  for (int d = 0; d < n; ++d) {
    cells[0].lo[d] = lower[d];
    cells[0].hi[d] = upper[d];
  }
  evaluate_cell(f, cells[0], n);
  IntegralResult out;
  out.evaluations = cell_evaluations(n);

  auto totals = [&] {
    Complex v{0.0, 0.0};
    double e = 0.0;
    for (const auto& c : cells) {
      v += c.value;
      e += c.error;
    }
    return std::pair{v, e};
  };

  const int children = 1 << n;
  int splits = 0;
  auto [value, error] = totals();
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
    if (splits >= spec.max_subdivisions) break;
    // Worst cell, lowest index on ties.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (cells[i].error > cells[worst].error) worst = i;
    }
    const Cell parent = cells[worst];
    std::vector<Cell> kids(children);
    for (int c = 0; c < children; ++c) {
      for (int d = 0; d < n; ++d) {
        const double mid = 0.5 * (parent.lo[d] + parent.hi[d]);
        const bool upper_half = (c >> d) & 1;
        kids[c].lo[d] = upper_half ? mid : parent.lo[d];
        kids[c].hi[d] = upper_half ? parent.hi[d] : mid;
      }
    }
    parallel_for(children, [&](int c) { evaluate_cell(f, kids[c], n); });
    out.evaluations += children * cell_evaluations(n);
    cells[worst] = kids[0];
    for (int c = 1; c < children; ++c) cells.push_back(kids[c]);
    ++splits;
    std::tie(value, error) = totals();
  }
  out.value = value;
  out.error_estimate = error;
  out.converged = error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
  if (!out.converged) {
    fail(ErrorKind::NonConvergence, "cubature exhausted " + std::to_string(spec.max_subdivisions) +
                                        " subdivisions (error " + std::to_string(error) + ")");
  }
  return out;
}

IntegralResult monte_carlo_box(const BoxFunction& f, std::span<const double> lower,
                               std::span<const double> upper, const QuadratureSpec& spec,
                               std::uint64_t seed) {
  spec.validate();
  if (lower.size() != upper.size() || lower.empty()) {
    fail(ErrorKind::InvalidBox, "box bounds must be non-empty and of equal dimension");
  }
  const std::size_t n = lower.size();
  double volume = 1.0;
  for (std::size_t d = 0; d < n; ++d) {
    if (!(upper[d] > lower[d]) || !std::isfinite(lower[d]) || !std::isfinite(upper[d])) {
      fail(ErrorKind::InvalidBox, "box must be finite with upper > lower");
    }
    volume *= upper[d] - lower[d];
  }
  std::mt19937_64 engine(seed);
  std::vector<double> x(n);
  Complex sum{0.0, 0.0};
  double sum_sq = 0.0;
  const long samples = spec.mc_samples;
  // Welford update keeps the variance stable for large sample counts.
  Complex mean{0.0, 0.0};
  for (long s = 0; s < samples; ++s) {
    for (std::size_t d = 0; d < n; ++d) {
      const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
      x[d] = lower[d] + (upper[d] - lower[d]) * u;
    }
    const Complex v = f(std::span<const double>(x.data(), n));
    sum += v;
    const Complex delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    sum_sq += std::real(delta * std::conj(v - mean));
  }
  IntegralResult out;
  out.value = volume * (sum / static_cast<double>(samples));
  const double variance = samples > 1 ? sum_sq / static_cast<double>(samples - 1) : 0.0;
  out.error_estimate = volume * std::sqrt(std::max(0.0, variance) / static_cast<double>(samples));
  out.evaluations = samples;
  out.converged = true;
  return out;
}

Complex trapezoid_periodic_nd(const BoxFunction& f, int dimension, int grid_per_axis) {
  if (dimension < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  if (grid_per_axis < 2) fail(ErrorKind::InvalidArgument, "grid_per_axis must be >= 2");
  const int n = dimension;
  const int m = grid_per_axis;
  std::vector<int> idx(n, 0);
  std::vector<double> x(n, 0.0);
  Complex sum{0.0, 0.0};
  long count = 0;
  while (true) {
    for (int d = 0; d < n; ++d) x[d] = static_cast<double>(idx[d]) / m;
    sum += f(std::span<const double>(x.data(), n));
    ++count;
    int d = 0;
    while (d < n && ++idx[d] == m) idx[d++] = 0;
    if (d == n) break;
  }
  return sum / static_cast<double>(count);
}

namespace {

// Calls visit(m) for every integer vector with max |m_j| == radius, in
// lexicographic order.
template <class Visit>
void for_each_shell_point(int n, int radius, Visit&& visit) {
  std::vector<int> m(n, -radius);
  while (true) {
    int norm = 0;
    for (int v : m) norm = std::max(norm, std::abs(v));
    if (norm == radius) visit(m);
    int d = n - 1;
    while (d >= 0 && ++m[d] > radius) m[d--] = -radius;
    if (d < 0) break;
  }
}

Eigen::VectorXd combine(std::span<const Eigen::VectorXd> generators, const std::vector<int>& m) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(generators[0].size());
  for (std::size_t j = 0; j < generators.size(); ++j) p += m[j] * generators[j];
  return p;
}

void check_generators(std::span<const Eigen::VectorXd> generators) {
  if (generators.empty()) fail(ErrorKind::InvalidArgument, "lattice needs at least one generator");
  for (const auto& g : generators) {
    if (g.size() != generators[0].size()) fail(ErrorKind::DimensionMismatch, "generator dimensions differ");
  }
}

}  // namespace

LatticeSumResult lattice_sum(const LatticeFunction& f, std::span<const Eigen::VectorXd> generators,
                             double tail_tol, int max_radius, int min_radius) {
  check_generators(generators);
  if (!(tail_tol > 0.0)) fail(ErrorKind::InvalidArgument, "tail_tol must be positive");
  const int n = static_cast<int>(generators.size());
  LatticeSumResult out;
  for (int r = 0; r <= max_radius; ++r) {
    Complex shell{0.0, 0.0};
    double shell_abs = 0.0;
    for_each_shell_point(n, r, [&](const std::vector<int>& m) {
      const Complex v = f(combine(generators, m));
      shell += v;
      shell_abs += std::abs(v);
      ++out.terms;
    });
    out.value += shell;
    out.radius = r;
    out.last_shell = shell_abs;
    if (r >= std::min(min_radius, max_radius) && r > 0 && shell_abs < tail_tol) return out;
  }
  fail(ErrorKind::NonConvergence, "lattice shells still above tail_tol at radius " +
                                      std::to_string(max_radius) + " (last shell " +
                                      std::to_string(out.last_shell) + ")");
}

Complex lattice_sum_fixed(const LatticeFunction& f, std::span<const Eigen::VectorXd> generators,
                          int radius) {
  check_generators(generators);
  if (radius < 0) fail(ErrorKind::InvalidArgument, "radius must be non-negative");
  const int n = static_cast<int>(generators.size());
  Complex total{0.0, 0.0};
  for (int r = 0; r <= radius; ++r) {
    for_each_shell_point(n, r, [&](const std::vector<int>& m) { total += f(combine(generators, m)); });
  }
  return total;
}

}  // namespace hyperct
