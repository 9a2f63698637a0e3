#include <cmath>
#include <numbers>
#include <random>

#include "boxspin/bell.hpp"
#include "boxspin/correlators.hpp"
#include "boxspin/errors.hpp"
#include "boxspin/verify/oracles.hpp"
#include "doctest.h"

using namespace boxspin;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<CorrelatorSet> random_sets(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<CorrelatorSet> sets;
  for (int i = 0; i < count; ++i) {
    sets.push_back(CorrelatorSet::synthetic(u(rng), u(rng), u(rng), 0.3 * u(rng), 0.3 * u(rng)));
  }
  return sets;
}

}  // namespace

TEST_SUITE("bell") {
  TEST_CASE("standard settings") {
    const auto s = ChshSettings::standard();
    CHECK(s.alpha == 0.0);
    CHECK(s.beta == Approx(kPi / 2));
    CHECK(s.gamma == Approx(kPi / 4));
    CHECK(s.delta == Approx(-kPi / 4));
    CHECK(ChshSettings::from_array(s.as_array()) == s);
    const auto w = ChshSettings{4.0, -4.0, kPi, 0.5}.wrapped();
    for (double a : w.as_array()) {
      CHECK(a >= -kPi);
      CHECK(a < kPi);
    }
  }

  TEST_CASE("chsh examples") {
    const auto ideal = chsh_value(CorrelatorSet::synthetic(1, 1), ChshSettings::standard());
    CHECK(ideal.value == Approx(2 * std::sqrt(2.0)));
    CHECK(ideal.bound == 2.0);
    CHECK(ideal.violated);
    const auto z_only = chsh_value(CorrelatorSet::synthetic(1, 0), ChshSettings::standard());
    CHECK(z_only.value == Approx(std::sqrt(2.0)));
    CHECK(!z_only.violated);
  }

  TEST_CASE("chsh at standard settings reduces to sqrt2 (|czz| + |cxx|) without cross terms") {
    for (const auto& set : random_sets(20, 1)) {
      auto plain = set;
      plain.czx = plain.cxz = 0;
      CHECK(chsh_value(plain, ChshSettings::standard()).value ==
            Approx(std::sqrt(2.0) * (std::abs(plain.czz) + std::abs(plain.cxx))));
    }
  }

  TEST_CASE("report invariants and shift by pi") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (const auto& set : random_sets(30, 2)) {
      const ChshSettings s{ang(rng), ang(rng), ang(rng), ang(rng)};
      const auto rep = chsh_value(set, s);
      CHECK(rep.value >= 0);
      CHECK(rep.violated == (rep.value > rep.bound));
      const ChshSettings shifted{s.alpha + kPi, s.beta + kPi, s.gamma + kPi, s.delta + kPi};
      CHECK(chsh_value(set, shifted).value == Approx(rep.value).epsilon(1e-12));
      CHECK(bit_bell_value(set, s).value == Approx(rep.value / 2).epsilon(1e-12));
      CHECK(bit_bell_value(set, s).bound == 1.0);
    }
  }

  TEST_CASE("bit-level expression") {
    const auto algebraic_max = bit_bell_value(
        [](double a, double g) { return (a == 1.0 && g == 1.0) ? 1.0 : 0.0; },
        ChshSettings{0.0, 1.0, 0.0, 1.0});
    CHECK(algebraic_max.value == 2.0);
    CHECK(algebraic_max.violated);
    CHECK_THROWS_AS(bit_bell_value([](double, double) { return 1.5; }, ChshSettings::standard()),
                    Error);
    CHECK_THROWS_AS(bit_bell_value([](double, double) { return -0.1; }, ChshSettings::standard()),
                    Error);
  }

  TEST_CASE("multibit totals") {
    const TruncationWindow window;
    const auto reference = multibit_value({{1, 1.25}, {0, 1.28}, {-1, 1.18}, {-2, 0.96}, {-3, 0.64}}, window);
    CHECK(reference.value == Approx(4.69).epsilon(1e-9));
    CHECK(reference.bound == 3.875);
    CHECK(reference.violated);
    CHECK(reference.weights.at(-3) == 0.125);
    const auto ones = multibit_value({{1, 1}, {0, 1}, {-1, 1}, {-2, 1}, {-3, 1}}, window);
    CHECK(ones.value == ones.bound);
    CHECK(!ones.violated);
    const auto single = multibit_value({{0, 1.28}}, TruncationWindow{0, 0});
    CHECK(single.value == Approx(1.28));
    CHECK(single.bound == 1.0);
    CHECK(single.violated);
    CHECK_THROWS_AS(multibit_value({{0, 1.0}}, window), Error);
    CHECK_THROWS_AS(multibit_value({{0, 1.0}}, TruncationWindow{0, 1}), Error);
  }

  TEST_CASE("local hidden-variable bounds by enumeration") {
    const auto strategies = enumerate_lhv_strategies();
    CHECK(strategies.size() == 16);
    double best = 0;
    for (const auto& s : strategies) {
      CHECK((s.chsh == 0.0 || s.chsh == 2.0));
      best = std::max(best, s.chsh);
    }
    CHECK(lhv_chsh_max() == best);
    CHECK(lhv_chsh_max() == 2.0);
    CHECK(lhv_bit_max() == 1.0);
    CHECK(lhv_multibit_bound(TruncationWindow{}) == TruncationWindow{}.weight_sum());
    CHECK(lhv_multibit_bound(TruncationWindow{}) == 3.875);
    // A half/half mixture of two strategies cannot beat the deterministic maximum.
    for (const auto& a : strategies) {
      for (const auto& b : strategies) {
        auto e = [&](int i, int j) {
          return 0.5 * a.outcomes[i] * a.outcomes[j] + 0.5 * b.outcomes[i] * b.outcomes[j];
        };
        CHECK(std::abs(e(0, 2) + e(0, 3)) + std::abs(e(1, 2) - e(1, 3)) <= 2.0);
      }
    }
  }

  TEST_CASE("optimizer on known cases") {
    const auto ideal = optimize_settings(CorrelatorSet::synthetic(1, 1));
    CHECK(ideal.value == Approx(2 * std::sqrt(2.0)).epsilon(1e-6));
    const auto z_only = optimize_settings(CorrelatorSet::synthetic(1, 0));
    CHECK(z_only.value == Approx(2.0).epsilon(1e-6));
    CHECK(verify::grid_search_chsh(CorrelatorSet::synthetic(1, 0), 1.0).value ==
          Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("optimizer never loses to standard settings and matches the tensor bound") {
    for (const auto& set : random_sets(10, 3)) {
      const auto best = optimize_settings(set);
      CHECK(best.value >= best.standard_value - 1e-9);
      CHECK(best.standard_value == Approx(chsh_value(set, ChshSettings::standard()).value));
      CHECK(best.value == Approx(verify::chsh_max_from_tensor(set)).epsilon(1e-6));
      CHECK(chsh_value(set, best.settings).value == Approx(best.value).epsilon(1e-12));
    }
  }

  TEST_CASE("optimizer is deterministic") {
    const auto set = CorrelatorSet::synthetic(0.7, 0.4, -0.4, 0.05, 0.02);
    const auto a = optimize_settings(set);
    const auto b = optimize_settings(set);
    CHECK(a.settings == b.settings);
    CHECK(a.value == b.value);
  }

  TEST_CASE("optimizer vs grid search on the squeezed state") {
    const auto set = correlator_set(1.0, 2.0);
    const auto best = optimize_settings(set);
    CHECK(std::abs(best.value - verify::grid_search_chsh(set).value) < 1e-3);
  }

  TEST_CASE("extended mode includes the yy correlator") {
    const auto set = CorrelatorSet::synthetic(0.5, 0.5, -0.9);
    const auto ext = optimize_settings_extended(set);
    CHECK(ext.value >= optimize_settings(set).value - 1e-9);
    // Largest two singular values of diag(cxx, cyy, czz).
    CHECK(ext.value == Approx(2 * std::sqrt(0.81 + 0.25)).epsilon(1e-6));
  }

  TEST_CASE("Nelder-Mead minimizes a quadratic") {
    const auto x = nelder_mead(
        [](const std::vector<double>& v) { return (v[0] - 1) * (v[0] - 1) + 3 * (v[1] + 2) * (v[1] + 2); },
        {0.0, 0.0}, 0.5, 1e-12, 5000);
    CHECK(x[0] == Approx(1.0).epsilon(1e-5));
    CHECK(x[1] == Approx(-2.0).epsilon(1e-5));
  }
}
