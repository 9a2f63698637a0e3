#pragma once

// CHSH evaluation, its bit-level XOR form, the truncated multi-bit
// inequality, local-hidden-variable bounds by enumeration, and measurement
// angle optimization.

#include <array>
#include <functional>
#include <map>
#include <vector>

#include "boxspin/bits.hpp"
#include "boxspin/correlators.hpp"

namespace boxspin {

/// Measurement angles in the x-z plane: alpha, beta at site one and gamma,
/// delta at site two.
struct ChshSettings {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;

  /// (0, pi/2, pi/4, -pi/4).
  static ChshSettings standard() noexcept;
  std::array<double, 4> as_array() const noexcept { return {alpha, beta, gamma, delta}; }
  static ChshSettings from_array(const std::array<double, 4>& a) noexcept {
    return {a[0], a[1], a[2], a[3]};
  }
  /// Each angle wrapped into [-pi, pi).
  ChshSettings wrapped() const noexcept;

  friend bool operator==(const ChshSettings&, const ChshSettings&) = default;
};

struct BellReport {
  double e_ag = 0.0;
  double e_ad = 0.0;
  double e_bg = 0.0;
  double e_bd = 0.0;
  double value = 0.0;
  double bound = 0.0;
  bool violated = false;
};

/// Two-site correlation as a function of the two local angles.
using AngleCorrelator = std::function<double(double, double)>;

/// Angle correlator backed by rotated_correlator on a correlator set.
AngleCorrelator spin_correlator(const CorrelatorSet& set);

/// |E(a,g) + E(a,d)| + |E(b,g) - E(b,d)|, bound 2.
BellReport chsh_value(const AngleCorrelator& e, const ChshSettings& s);
BellReport chsh_value(const CorrelatorSet& set, const ChshSettings& s);

/// |E1 + E2 - 1| + |E3 - E4|, bound 1, with E the XOR expectations.
/// Throws Error(RangeError) if any E_xor is outside [0, 1] by more than 1e-9.
BellReport bit_bell_value(const AngleCorrelator& e_xor, const ChshSettings& s);
/// Bit-level value from spin correlators via E_xor = (1 - E)/2.
BellReport bit_bell_value(const CorrelatorSet& set, const ChshSettings& s);

struct MultibitReport {
  /// Per-bit value and weight 2^k, keyed by k.
  std::map<int, double> per_bit;
  std::map<int, double> weights;
  double value = 0.0;
  double bound = 0.0;
  bool violated = false;
};

/// value = sum 2^k per_bit(k), bound = sum 2^k over the window.
/// Throws Error(RangeError) if a bit in the window has no value.
MultibitReport multibit_value(const std::map<int, double>& per_bit, TruncationWindow window);

/// One deterministic local strategy: the four predetermined +-1 results.
struct LhvStrategy {
  std::array<int, 4> outcomes;  // S_alpha, S_beta, S'_gamma, S'_delta
  double chsh = 0.0;
};

/// All 16 deterministic strategies with their CHSH values.
std::vector<LhvStrategy> enumerate_lhv_strategies();

/// Local-realist CHSH maximum by enumeration (mixtures are convex
/// combinations, so they cannot exceed it).
double lhv_chsh_max();

/// Local-realist maximum of the bit-level form by enumerating the 16
/// deterministic bit assignments.
double lhv_bit_max();

/// Local-realist bound of the multi-bit inequality: sum 2^k lhv_bit_max().
double lhv_multibit_bound(TruncationWindow window);

struct OptimizeOptions {
  double tolerance = 1e-9;
  int max_iterations = 20000;
};

struct OptimizeResult {
  ChshSettings settings;
  double value = 0.0;
  double standard_value = 0.0;
};

/// Maximizes the CHSH value over the four x-z plane angles: Nelder-Mead from
/// 16 fixed starts (the standard settings offset by 0 or pi/8 per angle).
/// The best start wins, ties broken lexicographically on the angles, and the
/// result is never below the standard-settings value.
OptimizeResult optimize_settings(const CorrelatorSet& set, const OptimizeOptions& options = {});

/// Direction on the Bloch sphere of a pseudo-spin: polar angle from z and
/// azimuth from x towards y.
struct SpinDirection {
  double theta = 0.0;
  double phi = 0.0;
};

struct ExtendedOptimizeResult {
  std::array<SpinDirection, 4> settings;  // a, b, c, d
  double value = 0.0;
};

/// Extended mode: two parameters per setting so the yy correlator enters.
/// Correlation tensor diag-like [[cxx, 0, cxz], [0, cyy, 0], [czx, 0, czz]];
/// xy and yz correlators are not computed and are taken as zero.
ExtendedOptimizeResult optimize_settings_extended(const CorrelatorSet& set,
                                                  const OptimizeOptions& options = {});

/// Minimizes f from `start` with a derivative-free simplex (Nelder-Mead).
/// Returns the best vertex found.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, double step, double tolerance,
                                int max_iterations);

}  // namespace boxspin
