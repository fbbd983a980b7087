#include <algorithm>
#include <fstream>
#include <string>

#include "doctest.h"
#include "hyperct/verifier.hpp"

using namespace hyperct;

namespace {

nlohmann::json load(const std::string& name) {
  std::ifstream file(std::string(HYPERCT_FIXTURE_DIR) + "/" + name);
  REQUIRE(file.good());
  return nlohmann::json::parse(file);
}

Complex complex_of(const nlohmann::json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

}  // namespace

// The fixture reports were produced by `hyperct sweep` on the same config.
// Each rerun must stay within ten times the residual recorded then.
TEST_CASE("default sweep reproduces the recorded reports") {
  const auto points = parse_sweep_config(load("default_points.json"));
  const nlohmann::json golden = load("golden_reports.json");
  REQUIRE(golden.size() == points.size());
  const auto reports = sweep(points);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const nlohmann::json now = to_json(reports[i]);
    const nlohmann::json& then = golden[i];
    CAPTURE(i);
    CAPTURE(then["identity"].get<std::string>());
    CHECK(now["identity"] == then["identity"]);
    CHECK(now["params"] == then["params"]);
    CHECK(now["tol"] == then["tol"]);
    CHECK(then["passed"] == true);
    CHECK(now["passed"] == true);
    const double rel_then = then["rel_err"].get<double>();
    const double abs_then = then["abs_err"].get<double>();
    const Complex rhs_then = complex_of(then["rhs"]);
    const double floor = 1e-14 * std::abs(rhs_then);
    CHECK(reports[i].rel_err <= 10.0 * std::max(rel_then, 1e-14));
    CHECK(std::abs(reports[i].rhs - rhs_then) <= 10.0 * std::max(abs_then, floor));
    CHECK(std::abs(reports[i].lhs - complex_of(then["lhs"])) <= 10.0 * std::max(abs_then, floor));
  }
}
