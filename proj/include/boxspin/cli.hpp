#pragma once

// Command-line driver: sweeps over (r, l), bit-level Bell reports, angle
// optimization, hidden-variable bounds, binary expansion demos and the
// acceptance battery.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace boxspin::cli {

enum class OutputFormat { Csv, Json };

/// Parameters of an (r, l) sweep.
struct SweepConfig {
  std::vector<double> r_list{0.0, 0.5, 1.0, 2.0};
  double l_min = 0.03;
  double l_max = 7.5;
  int points = 64;
  double tol = 1e-7;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::Csv;
  /// Empty or "-" writes to standard output.
  std::string out;

  /// Throws Error(RangeError) unless 0 < l_min < l_max, points >= 2, tol > 0
  /// and every r lies in the supported squeezing range.
  void validate() const;
  /// `points` box lengths, evenly spaced in log2 l, ends included.
  std::vector<double> l_values() const;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

void to_json(nlohmann::json& j, const SweepConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
void from_json(const nlohmann::json& j, SweepConfig& c);

/// Reads a config from JSON text. Accepts either a bare config object or a
/// sweep report carrying one under "config".
SweepConfig parse_config(const std::string& text);

/// Worker count: BOXSPIN_JOBS if set to a positive integer, else `requested`,
/// else the hardware concurrency.
unsigned resolve_jobs(unsigned requested);

/// Full CLI. `args` excludes the program name. Returns the exit code:
/// 0 on success, 1 on a failed selftest, 2 on argument errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boxspin::cli
