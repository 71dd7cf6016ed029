#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "magweyl/config.hpp"

namespace magweyl {

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

CheckResult make_check(std::string name, double err, double tol);

// Relative sup-distance max|a - b| / max(1, max|b|).
double rel_diff(const CMatrix& a, const CMatrix& b);

// Exact-group identities on d=1 M=9 and d=2 M=5x5 plus the cohomology checks.
std::vector<CheckResult> exact_suite(const RunConfig& cfg);
// Stokes, curl and transversal-gauge checks for cfg's field (d = 2).
std::vector<CheckResult> quadrature_suite(const RunConfig& cfg);
// Rotation algebra, truncations, Bloch reduction.
std::vector<CheckResult> lattice_suite(const RunConfig& cfg);

// {suite, checks:[{name, max_error, tolerance, passed}], seed}
nlohmann::json report_json(const std::string& suite, const std::vector<CheckResult>& checks, std::uint64_t seed);

}  // namespace magweyl
