#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "hyperct/errors.hpp"
#include "hyperct/hypergamma.hpp"

namespace hyperct::cli {

namespace {

// Raw option text, converted after CLI11 has matched the tokens.
struct RawOptions {
  std::string identity;
  std::string family = "A";
  int rank = 1;
  std::string identity_case = "i";
  std::string omega_plus = "1,0";
  std::string omega_minus = "1,0";
  std::string z = "0,0";
  std::string k;
  std::string k_short;
  std::string k_long;
  std::vector<std::string> gamma;
  std::string kappa;
  bool specialize = false;
  PointSpec defaults;
  std::string config;
  std::string out;
};

void add_quasi_periods(CLI::App* app, RawOptions& raw) {
  app->add_option("--omega-plus", raw.omega_plus, "w+ as RE,IM");
  app->add_option("--omega-minus", raw.omega_minus, "w- as RE,IM");
}

void add_verify_options(CLI::App* app, RawOptions& raw) {
  auto& p = raw.defaults;
  app->add_option("identity", raw.identity, "hyperbolic | qct | qsum | split | shintani | bc | chain")->required();
  add_quasi_periods(app, raw);
  app->add_option("--family", raw.family, "root system family: A B C D G");
  app->add_option("--rank", raw.rank, "rank of the root system or BC rank");
  app->add_option("--case", raw.identity_case, "identity case: i | ii");
  app->add_option("--k", raw.k, "multiplicity on every root, RE,IM");
  app->add_option("--k-short", raw.k_short, "multiplicity on short roots, RE,IM");
  app->add_option("--k-long", raw.k_long, "multiplicity on long roots, RE,IM");
  app->add_option("--gamma", raw.gamma, "four BC parameters, each RE,IM")->expected(4);
  app->add_option("--kappa", raw.kappa, "BC long-root parameter, RE,IM");
  app->add_flag("--specialize", raw.specialize, "bc: derive parameters from the root-system point");
  app->add_option("--tol", p.tol, "pass threshold (0 = identity default)");
  app->add_option("--rel-tol", p.spec.rel_tol, "quadrature relative tolerance");
  app->add_option("--abs-tol", p.spec.abs_tol, "quadrature absolute tolerance");
  app->add_option("--max-subdivisions", p.spec.max_subdivisions, "quadrature subdivision budget");
  app->add_option("--truncation-safety", p.spec.truncation_safety, "multiplier on truncation radii");
  app->add_option("--mc-samples", p.spec.mc_samples, "Monte-Carlo samples for rank >= 4");
  app->add_option("--grid", p.grid, "qct trapezoid points per axis");
  app->add_option("--count", p.count, "split/shintani sample count");
  app->add_option("--seed", p.seed, "random seed");
  app->add_option("--base", p.base, "qsum base point in coweight coordinates");
  app->add_option("--tail-tol", p.tail_tol, "qsum shell threshold");
  app->add_option("--out", raw.out, "write the JSON report here");
}

Complex complex_option(const std::string& text, const char* name) {
  try {
    return parse_complex(text);
  } catch (const Error&) {
    throw UsageError(std::string("--") + name + " expects RE,IM with decimal literals, got '" + text + "'");
  }
}

PointSpec point_from_raw(const RawOptions& raw) {
  PointSpec p = raw.defaults;
  try {
    p.identity = parse_identity(raw.identity);
    p.family = parse_family(raw.family);
    p.identity_case = parse_case(raw.identity_case);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  p.rank = raw.rank;
  p.omega_plus = complex_option(raw.omega_plus, "omega-plus");
  p.omega_minus = complex_option(raw.omega_minus, "omega-minus");
  if (!raw.k.empty()) p.k_short = p.k_long = complex_option(raw.k, "k");
  if (!raw.k_short.empty()) p.k_short = complex_option(raw.k_short, "k-short");
  if (!raw.k_long.empty()) p.k_long = complex_option(raw.k_long, "k-long");
  for (std::size_t r = 0; r < raw.gamma.size(); ++r) p.gamma[r] = complex_option(raw.gamma[r], "gamma");
  if (!raw.kappa.empty()) p.kappa = complex_option(raw.kappa, "kappa");
  p.specialize = raw.specialize;
  return p;
}

std::string describe(const VerificationReport& r) {
  std::ostringstream os;
  const char* status = r.error ? "ERROR" : (r.passed ? "PASS" : "FAIL");
  os << status << " " << r.identity;
  const auto& p = r.params;
  if (r.identity != "shintani" && !(r.identity == "bc" && !p.value("specialize", false))) {
    os << " " << p.value("family", "") << p.value("rank", 0) << " case " << p.value("case", "");
  } else if (r.identity == "bc") {
    os << " n=" << p.value("rank", 0);
  }
  if (r.error) {
    os << ": " << r.diagnostics.value("message", "");
    return os.str();
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf), " lhs=%.12g%+.12gi rhs=%.12g%+.12gi rel_err=%.3g tol=%.3g wall_ms=%.1f",
                r.lhs.real(), r.lhs.imag(), r.rhs.real(), r.rhs.imag(), r.rel_err, r.tol, r.wall_ms);
  return os.str() + buf;
}

int exit_code_for(const std::vector<VerificationReport>& reports) {
  bool invalid = false;
  bool failed = false;
  for (const auto& r : reports) {
    if (r.error && is_input_error(*r.error)) {
      invalid = true;
    } else if (!r.passed) {
      failed = true;
    }
  }
  if (invalid) return kInvalidInput;
  return failed ? kNumericFail : kPass;
}

struct SelfCheck {
  std::string name;
  std::function<std::pair<bool, double>()> run;  // (passed, worst deviation)
};

std::vector<SelfCheck> self_checks() {
  std::vector<SelfCheck> checks;
  const QuasiPeriods unit(1.0, 1.0);
  const QuasiPeriods skew(Complex(1.0, 0.0), std::polar(1.0, -kPi / 6.0));
  auto rel = [](Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  auto g = [](const QuasiPeriods& qp, Complex z) { return gamma(qp, z).value; };

  checks.push_back({"gamma special values", [=] {
                      double worst = rel(g(unit, 0.0), 1.0);
                      for (const auto& qp : {unit, skew, QuasiPeriods(2.0, 1.0)}) {
                        worst = std::max(worst, rel(g(qp, 0.5 * kI * qp.wplus()), std::sqrt(2.0)));
                        worst = std::max(worst, rel(g(qp, 0.5 * kI * qp.wminus()), std::sqrt(2.0)));
                        worst = std::max(worst, rel(g(qp, 0.5 * kI * (qp.wminus() - qp.wplus())),
                                                    std::sqrt(qp.wminus() / qp.wplus())));
                      }
                      return std::pair{worst <= 1e-10, worst};
                    }});
  checks.push_back({"gamma reflection and functional equations", [=] {
                      std::mt19937_64 engine(7);
                      std::uniform_real_distribution<double> u(-1.0, 1.0);
                      double worst = 0.0;
                      for (int i = 0; i < 20; ++i) {
                        const Complex z{1.5 * u(engine), 0.4 * u(engine)};
                        worst = std::max(worst, std::abs(g(skew, z) * g(skew, -z) - 1.0));
                        const Complex wp = skew.wplus(), wm = skew.wminus();
                        worst = std::max(worst, rel(g(skew, z + 0.5 * kI * wp) / g(skew, z - 0.5 * kI * wp),
                                                    2.0 * std::cosh(kPi * z / wm)));
                        worst = std::max(worst, rel(g(skew, z + 0.5 * kI * wm) / g(skew, z - 0.5 * kI * wm),
                                                    2.0 * std::cosh(kPi * z / wp)));
                      }
                      return std::pair{worst <= 1e-9, worst};
                    }});
  auto report_check = [](const std::string& name, PointSpec p) {
    return SelfCheck{name, [p] {
                       const VerificationReport r = run_point(p);
                       return std::pair{r.passed && !r.error, r.rel_err};
                     }};
  };
  PointSpec s_prime;
  s_prime.omega_plus = std::polar(1.0, -kPi / 6.0);
  s_prime.omega_minus = std::polar(1.0, -kPi / 3.0);
  s_prime.k_short = s_prime.k_long = Complex(-0.1, -0.5);
  PointSpec p = s_prime;
  p.identity = Identity::Shintani;
  p.omega_plus = 1.0;
  p.omega_minus = std::polar(1.0, -kPi / 6.0);
  p.count = 20;
  checks.push_back(report_check("shintani product", p));
  for (const Identity id : {Identity::Split, Identity::Chain, Identity::QConstantTerm, Identity::QSum}) {
    p = s_prime;
    p.identity = id;
    p.count = 20;
    p.grid = 32;
    checks.push_back(report_check(to_string(id) + " A1", p));
  }
  p = PointSpec{};
  p.omega_plus = p.omega_minus = std::polar(1.0, -kPi / 4.0);
  p.k_short = p.k_long = Complex(-1.0, -1.0);
  checks.push_back(report_check("hyperbolic A1 co-linear", p));
  p.identity = Identity::BC;
  p.specialize = true;
  checks.push_back(report_check("bc A1 specialization", p));
  return checks;
}

std::string format_gamma(Complex z) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "G = %.12f %c %.12fi", z.real(), z.imag() < 0.0 ? '-' : '+',
                std::abs(z.imag()));
  return buf;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Numerical verification of hyperbolic and q-type constant term identities", "hyperct"};
  app.require_subcommand(1);
  RawOptions raw;
  auto* gamma_cmd = app.add_subcommand("gamma", "evaluate the hyperbolic gamma function");
  add_quasi_periods(gamma_cmd, raw);
  gamma_cmd->add_option("--z", raw.z, "argument as RE,IM");
  auto* verify_cmd = app.add_subcommand("verify", "verify one identity at one parameter point");
  add_verify_options(verify_cmd, raw);
  auto* sweep_cmd = app.add_subcommand("sweep", "run the verifications listed in a JSON config");
  sweep_cmd->add_option("--config", raw.config, "sweep config file")->required();
  sweep_cmd->add_option("--out", raw.out, "write the JSON reports here");
  app.add_subcommand("selftest", "run the built-in invariant suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    std::ostringstream text;
    app.exit(e, text, text);
    throw HelpRequested(text.str());
  } catch (const CLI::ParseError& e) {
    if (args.empty()) throw HelpRequested(app.help());
    throw UsageError(e.what());
  }

  RunConfig config;
  if (gamma_cmd->parsed()) {
    config.command = Command::Gamma;
    config.point.omega_plus = complex_option(raw.omega_plus, "omega-plus");
    config.point.omega_minus = complex_option(raw.omega_minus, "omega-minus");
    config.z = complex_option(raw.z, "z");
  } else if (verify_cmd->parsed()) {
    config.command = Command::Verify;
    config.point = point_from_raw(raw);
    config.out_path = raw.out;
  } else if (sweep_cmd->parsed()) {
    config.command = Command::Sweep;
    config.config_path = raw.config;
    config.out_path = raw.out;
  } else {
    config.command = Command::Selftest;
  }
  return config;
}

std::vector<std::string> render(const RunConfig& c) {
  std::vector<std::string> out;
  auto opt = [&](const std::string& name, const std::string& value) { out.push_back("--" + name + "=" + value); };
  switch (c.command) {
    case Command::Gamma:
      out.push_back("gamma");
      opt("omega-plus", format_complex(c.point.omega_plus));
      opt("omega-minus", format_complex(c.point.omega_minus));
      opt("z", format_complex(c.z));
      break;
    case Command::Verify: {
      const PointSpec& p = c.point;
      out.push_back("verify");
      out.push_back(to_string(p.identity));
      opt("family", to_string(p.family));
      opt("rank", std::to_string(p.rank));
      opt("case", to_string(p.identity_case));
      opt("omega-plus", format_complex(p.omega_plus));
      opt("omega-minus", format_complex(p.omega_minus));
      opt("k-short", format_complex(p.k_short));
      opt("k-long", format_complex(p.k_long));
      out.push_back("--gamma");
      for (const Complex g : p.gamma) out.push_back(format_complex(g));
      opt("kappa", format_complex(p.kappa));
      if (p.specialize) out.push_back("--specialize");
      opt("tol", format_double(p.tol));
      opt("rel-tol", format_double(p.spec.rel_tol));
      opt("abs-tol", format_double(p.spec.abs_tol));
      opt("max-subdivisions", std::to_string(p.spec.max_subdivisions));
      opt("truncation-safety", format_double(p.spec.truncation_safety));
      opt("mc-samples", std::to_string(p.spec.mc_samples));
      opt("grid", std::to_string(p.grid));
      opt("count", std::to_string(p.count));
      opt("seed", std::to_string(p.seed));
      for (const double b : p.base) opt("base", format_double(b));
      opt("tail-tol", format_double(p.tail_tol));
      if (!c.out_path.empty()) opt("out", c.out_path);
      break;
    }
    case Command::Sweep:
      out.push_back("sweep");
      opt("config", c.config_path);
      if (!c.out_path.empty()) opt("out", c.out_path);
      break;
    case Command::Selftest:
      out.push_back("selftest");
      break;
  }
  return out;
}

void emit_report(const std::vector<VerificationReport>& reports, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  file << dump_reports(reports);
  file.flush();
  if (!file) fail(ErrorKind::IoError, "failed writing '" + path + "'");
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    switch (c.command) {
      case Command::Gamma: {
        const GammaValue v = gamma(QuasiPeriods(c.point.omega_plus, c.point.omega_minus), c.z);
        out << format_gamma(v.value) << "\n";
        return kPass;
      }
      case Command::Verify: {
        const VerificationReport r = run_point(c.point);
        (r.error ? err : out) << describe(r) << "\n";
        if (!c.out_path.empty()) emit_report({r}, c.out_path);
        return exit_code_for({r});
      }
      case Command::Sweep: {
        std::ifstream file(c.config_path, std::ios::binary);
        if (!file) fail(ErrorKind::IoError, "cannot read '" + c.config_path + "'");
        nlohmann::json config;
        try {
          config = nlohmann::json::parse(file);
        } catch (const nlohmann::json::parse_error& e) {
          fail(ErrorKind::InvalidArgument, "malformed sweep config: " + std::string(e.what()));
        }
        const auto reports = sweep(parse_sweep_config(config));
        for (const auto& r : reports) out << describe(r) << "\n";
        if (!c.out_path.empty()) emit_report(reports, c.out_path);
        return exit_code_for(reports);
      }
      case Command::Selftest: {
        bool all = true;
        for (const auto& check : self_checks()) {
          bool ok = false;
          double dev = 0.0;
          try {
            std::tie(ok, dev) = check.run();
          } catch (const Error& e) {
            out << "FAIL " << check.name << ": " << e.what() << "\n";
            all = false;
            continue;
          }
          char buf[64];
          std::snprintf(buf, sizeof(buf), " (deviation %.3g)", dev);
          out << (ok ? "PASS " : "FAIL ") << check.name << buf << "\n";
          all = all && ok;
        }
        return all ? kPass : kNumericFail;
      }
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (e.kind() == ErrorKind::IoError) return kIoError;
    return is_input_error(e.kind()) ? kInvalidInput : kNumericFail;
  }
  return kNumericFail;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& e) {
    out << e.what();
    return kPass;
  } catch (const UsageError& e) {
    err << "invalid arguments: " << e.what() << "\n";
    return kInvalidInput;
  }
  return run(config, out, err);
}

}  // namespace hyperct::cli
