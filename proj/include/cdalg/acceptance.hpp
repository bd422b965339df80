#ifndef CDALG_ACCEPTANCE_HPP
#define CDALG_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cdalg {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  ///< measured quantities behind the verdict
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Fewer random samples per criterion (the selftest); same tolerances.
  bool reduced = false;
  std::uint64_t seed = 42;
  /// Runs with the basis-table sign fault enabled.
  bool inject_sign_fault = false;
  /// Criterion 14 times a reduced run of 1..13; off inside that run.
  bool nested_selftest = true;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// One "criterion N  PASS|FAIL  name  (detail)" line per result.
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace cdalg

#endif
