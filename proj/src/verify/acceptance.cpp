#include "boxspin/verify/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "boxspin/bell.hpp"
#include "boxspin/bits.hpp"
#include "boxspin/boxops.hpp"
#include "boxspin/correlators.hpp"
#include "boxspin/gaussian_state.hpp"
#include "boxspin/quadrature.hpp"
#include "boxspin/verify/oracles.hpp"

namespace boxspin::verify {

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool condition) { passed = passed && condition; }
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;
  std::function<void(Outcome&)> body;
};

// Shared between criteria run in one process; keys include the spec.
CorrelatorCache& shared_cache() {
  static CorrelatorCache cache;
  return cache;
}

CorrelatorSet nopa_set(double l, double r) { return correlator_set(l, r, {}, &shared_cache()); }

std::vector<double> log2_sweep(double lo, double hi, int points) {
  std::vector<double> out;
  const double a = std::log2(lo);
  const double b = std::log2(hi);
  for (int i = 0; i < points; ++i) {
    out.push_back(std::exp2(a + (b - a) * i / (points - 1)));
  }
  return out;
}

void normalization(Outcome& o) {
  for (double r : {0.0, 0.5, 1.0, 2.0}) {
    const SqueezeState state(r);
    const QuadratureSpec spec = resolve_spec({}, state, 1.0);
    const IntegralResult total = integrate_lattice_signed(
        density_integrand(state), 1.0, [](std::int64_t, std::int64_t) { return 1; }, spec);
    const double dev = std::abs(total.value - 1.0);
    o.require(dev < 1e-7);
    o.detail << "r=" << r << ":|I-1|=" << dev << " ";
  }
}

void large_l_asymptote(Outcome& o) {
  for (double r : {0.5, 1.0, 2.0}) {
    const double czz = correlator(SpinPair::ZZ, 7.5, r, {}, &shared_cache()).value;
    const double limit = czz_asymptote(SqueezeState(r));
    const double dev = std::abs(czz - limit);
    o.require(dev < 0.02);
    o.detail << "r=" << r << ":czz=" << czz << " limit=" << limit << " ";
  }
}

void small_l_limit(Outcome& o) {
  for (double r : {0.0, 0.5, 1.0}) {
    const double sx = single_site(SiteAxis::X, 0.03, r).value;
    const double cxx = correlator(SpinPair::XX, 0.03, r, {}, &shared_cache()).value;
    o.require(sx >= 0.99 && cxx >= 0.99);
    o.detail << "r=" << r << ":<sx>=" << sx << " cxx=" << cxx << " ";
  }
}

void chsh_sweep_values(Outcome& o) {
  const std::map<double, double> expected{
      {2.0, 2.50}, {1.0, 2.56}, {0.5, 2.36}, {0.25, 1.92}, {0.125, 1.28}};
  for (auto it = expected.rbegin(); it != expected.rend(); ++it) {
    const auto [l, target] = *it;
    const BellReport report = chsh_value(nopa_set(l, 2.0), ChshSettings::standard());
    const bool should_violate = l >= 0.5;
    const bool ok = std::abs(report.value - target) <= 0.06 && report.violated == should_violate;
    o.require(ok);
    o.detail << "l=" << l << ":" << report.value;
    if (!ok) o.detail << "(want " << target << ")";
    o.detail << " ";
  }
}

void multibit_total(Outcome& o) {
  const TruncationWindow window{1, -3};
  std::map<int, double> per_bit;
  for (int k = window.k_lo; k <= window.k_hi; ++k) {
    per_bit[k] = bit_bell_value(nopa_set(std::ldexp(1.0, k), 2.0), ChshSettings::standard()).value;
  }
  const MultibitReport report = multibit_value(per_bit, window);
  o.require(std::abs(report.value - 4.7) <= 0.1);
  o.require(report.value > report.bound);
  o.detail << "total=" << report.value << " bound=" << report.bound << " per-bit:";
  for (const auto& [k, v] : report.per_bit) o.detail << " k" << k << "=" << v;
}

void no_violation_unsqueezed(Outcome& o) {
  double worst = 0.0;
  for (double l : log2_sweep(0.03, 7.5, 16)) {
    worst = std::max(worst, chsh_value(nopa_set(l, 0.0), ChshSettings::standard()).value);
  }
  o.require(worst <= 2.0 + 1e-6);
  o.detail << "max chsh over sweep=" << worst;
}

void orthogonal_symmetry(Outcome& o) {
  const std::pair<double, double> points[] = {
      {0.3, 0.5}, {1.0, 1.0}, {2.0, 2.0}, {0.7, 1.5}, {5.0, 0.25}};
  double worst_cross = 0.0;
  double worst_z = 0.0;
  for (const auto& [l, r] : points) {
    worst_cross = std::max({worst_cross, std::abs(correlator(SpinPair::ZX, l, r).value),
                            std::abs(correlator(SpinPair::XZ, l, r).value)});
    worst_z = std::max(worst_z, std::abs(single_site(SiteAxis::Z, l, r).value));
  }
  o.require(worst_cross < 1e-5 && worst_z < 1e-6);
  o.detail << "max|czx|,|cxz|=" << worst_cross << " max|<sz>|=" << worst_z;
}

void operator_algebra(Outcome& o) {
  const GaussInt two_i{0, 2};
  int grids = 0;
  for (std::size_t n : {16u, 32u, 64u, 128u, 256u}) {
    for (bool centered : {false, true}) {
      const Grid grid = centered ? Grid::centered(n, 0) : Grid(n, 0, 0);
      const ExactMatrix identity = ExactMatrix::identity(n);
      for (std::size_t s : {1u, 2u, 4u, 8u}) {
        if (!grid.supports(s)) continue;
        ++grids;
        const auto x = build_spin_operator(SpinAxis::X, s, grid);
        const auto y = build_spin_operator(SpinAxis::Y, s, grid);
        const auto z = build_spin_operator(SpinAxis::Z, s, grid);
        const auto plus = build_spin_operator(SpinAxis::Plus, s, grid);
        const auto minus = build_spin_operator(SpinAxis::Minus, s, grid);
        o.require(x.matrix * x.matrix == identity);
        o.require(y.matrix * y.matrix == identity);
        o.require(z.matrix * z.matrix == identity);
        o.require(commutator(x, y) == two_i * z.matrix);
        o.require(commutator(y, z) == two_i * x.matrix);
        o.require(commutator(z, x) == two_i * y.matrix);
        o.require(plus.matrix == minus.matrix.adjoint());
        o.require(!hierarchy_commutes(s, s, grid).all_commute);
        for (std::size_t ratio : {2u, 4u}) {
          if (grid.supports(s * ratio)) {
            o.require(hierarchy_commutes(s, s * ratio, grid).all_commute);
          }
        }
      }
    }
  }
  o.detail << grids << " grid/scale combinations checked exactly";
}

void oracle_agreement(Outcome& o) {
  const std::pair<double, double> points[] = {
      {1.0, 1.0}, {0.5, 2.0}, {2.0, 0.5}, {0.3, 1.5}, {4.0, 1.0}};
  std::uint64_t seed = 1;
  double worst_sigma = 0.0;
  for (const auto& [l, r] : points) {
    const double quad = correlator(SpinPair::ZZ, l, r, {}, &shared_cache()).value;
    const SampledEstimate mc = czz_sampled(l, r, 1'000'000, seed++);
    const double sigmas = std::abs(quad - mc.estimate) / mc.std_error;
    worst_sigma = std::max(worst_sigma, sigmas);
    o.require(sigmas <= 3.0);
  }
  const GridOracleResult grid = grid_correlators(1.0, 1.0, -6, 2048);
  const double dxx = std::abs(grid.cxx - correlator(SpinPair::XX, 1.0, 1.0, {}, &shared_cache()).value);
  const double dyy = std::abs(grid.cyy - correlator(SpinPair::YY, 1.0, 1.0, {}, &shared_cache()).value);
  o.require(dxx <= 1e-3 && dyy <= 1e-3);
  o.detail << "MC worst=" << worst_sigma << " SE; grid |dXX|=" << dxx << " |dYY|=" << dyy;
}

void lhv_bounds(Outcome& o) {
  const double chsh_max = lhv_chsh_max();
  const double multibit = lhv_multibit_bound(TruncationWindow{1, -3});
  o.require(chsh_max == 2.0);
  o.require(multibit == 3.875);
  for (const LhvStrategy& s : enumerate_lhv_strategies()) {
    o.require(s.chsh == 0.0 || s.chsh == 2.0);
  }
  for (int b = 0; b < 2; ++b) {
    for (int b2 = 0; b2 < 2; ++b2) {
      o.require(spin_from_bit(b ^ b2) == spin_from_bit(b) * spin_from_bit(b2));
    }
  }
  o.detail << "chsh max=" << chsh_max << " multibit bound=" << multibit;
}

void optimizer(Outcome& o) {
  std::vector<CorrelatorSet> sets{CorrelatorSet::synthetic(1.0, 1.0),
                                  CorrelatorSet::synthetic(1.0, 0.0),
                                  CorrelatorSet::synthetic(0.3, 0.9, 0.0, 0.05, -0.02)};
  for (double l : {2.0, 1.0, 0.5, 0.25, 0.125}) sets.push_back(nopa_set(l, 2.0));
  for (const CorrelatorSet& set : sets) {
    const OptimizeResult best = optimize_settings(set);
    o.require(best.value >= best.standard_value);
  }
  const CorrelatorSet target = nopa_set(1.0, 2.0);
  const double optimized = optimize_settings(target).value;
  const double searched = grid_search_chsh(target, 2.0).value;
  o.require(std::abs(optimized - searched) <= 1e-3);
  o.detail << sets.size() << " sets >= standard; (r=2,l=1) optimizer=" << optimized
           << " grid=" << searched;
}

void bit_machinery(Outcome& o) {
  const std::string rendered = format_binary(MeasuredPosition(5.296875), TruncationWindow{2, -7});
  o.require(rendered == "101.0100110");
  std::size_t checked = 0;
  for (const TruncationWindow w : {TruncationWindow{1, -3}, TruncationWindow{3, -5},
                                   TruncationWindow{0, 0}, TruncationWindow{-2, -6}}) {
    const std::int64_t count = std::int64_t{1} << w.size();
    for (std::int64_t j = 0; j < count; ++j) {
      const double q = std::ldexp(static_cast<double>(j), w.k_lo);
      o.require(truncated_value(MeasuredPosition(q), w) == q);
      ++checked;
    }
  }
  o.detail << "format=\"" << rendered << "\", " << checked << " dyadic reconstructions exact";
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "normalization of psi^2", 5.0, normalization},
      {2, "large-l ZZ asymptote", 30.0, large_l_asymptote},
      {3, "small-l <s_x> and cxx", 30.0, small_l_limit},
      {4, "r=2 CHSH values at standard settings", 120.0, chsh_sweep_values},
      {5, "multi-bit inequality total", 120.0, multibit_total},
      {6, "no violation at r=0", 60.0, no_violation_unsqueezed},
      {7, "orthogonal-axis and single-site symmetry", 60.0, orthogonal_symmetry},
      {8, "exact pseudo-spin algebra", 30.0, operator_algebra},
      {9, "quadrature vs Monte Carlo and grid oracle", 120.0, oracle_agreement},
      {10, "local-hidden-variable bounds", 1.0, lhv_bounds},
      {11, "angle optimizer vs grid search", 120.0, optimizer},
      {12, "binary expansion machinery", 10.0, bit_machinery},
  };
  return all;
}

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (const auto& c : criteria()) ids.push_back(c.id);
  return ids;
}

CriterionResult run_criterion(int id) {
  for (const auto& c : criteria()) {
    if (c.id != id) continue;
    CriterionResult result;
    result.id = c.id;
    result.name = c.name;
    result.time_limit = c.time_limit;
    Outcome outcome;
    outcome.detail << std::setprecision(6);
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(outcome);
    } catch (const std::exception& e) {
      outcome.passed = false;
      outcome.detail << " exception: " << e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.passed = outcome.passed && result.seconds <= result.time_limit;
    result.detail = outcome.detail.str();
    if (result.seconds > result.time_limit) result.detail += " [over time budget]";
    return result;
  }
  CriterionResult missing;
  missing.id = id;
  missing.name = "unknown criterion";
  return missing;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::ostream& out) {
  std::vector<CriterionResult> results;
  for (int id : ids) {
    results.push_back(run_criterion(id));
    out << format_result(results.back()) << '\n' << std::flush;
  }
  return results;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream line;
  line << (r.passed ? "PASS" : "FAIL") << " [" << std::setw(2) << r.id << "] " << r.name << " ("
       << std::fixed << std::setprecision(2) << r.seconds << " s / " << std::setprecision(0)
       << r.time_limit << " s): " << r.detail;
  return line.str();
}

}  // namespace boxspin::verify
