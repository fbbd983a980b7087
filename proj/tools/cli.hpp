#pragma once

// Command-line surface: argument parsing, execution and report output.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperct/verifier.hpp"

namespace hyperct::cli {

enum class Command { Gamma, Verify, Sweep, Selftest };

struct RunConfig {
  Command command = Command::Selftest;
  PointSpec point;  // verify: identity and parameters; gamma: quasi-periods
  Complex z{0.0, 0.0};
  std::string config_path;
  std::string out_path;

  bool operator==(const RunConfig&) const = default;
};

// Invalid usage, reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --help or an empty command line; carries the text to print.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// args excludes the program name. Throws UsageError or HelpRequested.
RunConfig parse_args(const std::vector<std::string>& args);

// Arguments that parse back to the same config.
std::vector<std::string> render(const RunConfig& config);

// Executes the config; returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Writes the reports as a JSON array; throws Error(IoError) when the path
// cannot be written.
void emit_report(const std::vector<VerificationReport>& reports, const std::string& path);

// Full entry point: parsing, help, execution and exit-code mapping.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

enum ExitCode { kPass = 0, kNumericFail = 1, kInvalidInput = 2, kIoError = 3 };

}  // namespace hyperct::cli
