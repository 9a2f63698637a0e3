#pragma once

// The acceptance battery: numbered criteria, each with its own numeric
// tolerance and wall-clock budget. Shared by the acceptance test binary and
// `boxspin selftest`.

#include <iosfwd>
#include <string>
#include <vector>

namespace boxspin::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Human-readable numbers behind the verdict.
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;
};

/// Ids of all criteria, in order (1..12).
std::vector<int> criterion_ids();

/// Runs one criterion. Exceptions thrown inside count as a failure.
CriterionResult run_criterion(int id);

/// Runs the given criteria, printing one line per criterion to `out` as it
/// completes. Returns all results.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::ostream& out);

/// "PASS [ 4] name (1.23 s / 120 s): detail"
std::string format_result(const CriterionResult& result);

}  // namespace boxspin::verify
