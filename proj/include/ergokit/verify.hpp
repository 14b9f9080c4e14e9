#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ergokit/serialize.hpp"

namespace ergokit {

// One invariant evaluated over a batch: `residual` is the worst deviation
// (or worst violation for inequalities) and passes when <= tolerance.
struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::string suite = "all";
  // Negative control: the Theorem-1 closed forms use conjugated dephasing
  // factors, which must make the equivalence suite fail.
  bool corrupt_gamma = false;
};

const std::vector<std::string>& suite_names();

std::vector<SuiteResult> run_verification(const VerifyOptions& options);

// {passed, seed, suites: [{name, passed, checks: [{name, residual, tolerance, cases, passed, detail}]}]}
Json verification_report(const std::vector<SuiteResult>& suites, const VerifyOptions& options);
bool all_passed(const std::vector<SuiteResult>& suites);

}  // namespace ergokit
