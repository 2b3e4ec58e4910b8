#pragma once

#include <string>
#include <vector>

namespace graphctl {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// The ten demonstration scenarios (closed-form spectra, oracle agreement,
// gap diagnostics, spreading, null control, steering, cost blow-up,
// semiglobal entry, filtering, biorthogonal norm shape). Each runs
// independently; a thrown module error marks its criterion failed instead of
// aborting the batch. Tolerances and budgets are pinned in the implementation.
std::vector<CriterionResult> run_acceptance();

// One line per criterion ("A3 PASS  (0.42 s)  gamma=..."), suitable for both
// the test harness and the CLI.
std::string format_acceptance(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace graphctl
