#include <cmath>
#include <numbers>
#include <random>

#include "boxspin/errors.hpp"
#include "boxspin/gaussian_state.hpp"
#include "boxspin/quadrature.hpp"
#include "boxspin/verify/oracles.hpp"
#include "doctest.h"

using namespace boxspin;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("gaussian_state") {
  TEST_CASE("state moments") {
    for (double r : {0.0, 0.3, 1.0, 2.0, 5.0}) {
      const SqueezeState s(r);
      CHECK(s.cosh2r() * s.cosh2r() - s.sinh2r() * s.sinh2r() ==
            Approx(1.0).epsilon(1e-12 * s.cosh2r() * s.cosh2r()));
      CHECK(s.rho() >= 0.0);
      CHECK(s.rho() < 1.0);
      CHECK((s.rho() == 0.0) == (r == 0.0));
      CHECK(s.sigma2() >= 0.5);
      CHECK((s.sigma2() == 0.5) == (r == 0.0));
      CHECK(s.rho() == Approx(std::tanh(2 * r)));
    }
  }

  TEST_CASE("squeezing outside the supported range is rejected") {
    CHECK_THROWS_AS(SqueezeState(-0.1), Error);
    CHECK_THROWS_AS(SqueezeState(5.01), Error);
    CHECK_THROWS_AS(SqueezeState(std::nan("")), Error);
    try {
      SqueezeState bad(-1.0);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidState);
    }
  }

  TEST_CASE("wavefunction values") {
    for (double r : {0.0, 1.0, 2.0}) {
      CHECK(wavefunction(0, 0, SqueezeState(r)) == Approx(1.0 / std::sqrt(kPi)).epsilon(1e-15));
      CHECK(joint_density(0, 0, SqueezeState(r)) == Approx(1.0 / kPi).epsilon(1e-15));
    }
    CHECK(wavefunction(1, 1, SqueezeState(0)) == Approx(0.207554).epsilon(1e-5));
    CHECK(wavefunction(1, 1, SqueezeState(0)) == Approx(std::exp(-1.0) / std::sqrt(kPi)));
  }

  TEST_CASE("wavefunction is symmetric and squares to the density") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    const SqueezeState s(0.8);
    for (int i = 0; i < 100; ++i) {
      const double a = u(rng), b = u(rng);
      CHECK(wavefunction(a, b, s) == wavefunction(b, a, s));
      const double w = wavefunction(a, b, s);
      CHECK(joint_density(a, b, s) == Approx(w * w).epsilon(1e-12));
    }
  }

  TEST_CASE("unsqueezed density factorizes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const SqueezeState s(0.0);
    for (int i = 0; i < 50; ++i) {
      const double a = u(rng), b = u(rng);
      CHECK(joint_density(a, b, s) ==
            Approx(joint_density(a, 0, s) * joint_density(0, b, s) * kPi).epsilon(1e-12));
    }
  }

  TEST_CASE("density normalizes over a truncated plane") {
    const SqueezeState s(1.0);
    const double radius = 10.0 * std::sqrt(s.sigma2());
    QuadratureSpec spec;
    spec.max_panel_width = s.sigma_min() / 2;
    spec.abs_tol = 1e-10;
    const auto f = [&](double x, double y) { return joint_density(x, y, s); };
    const IntegralResult total = integrate_rect(f, {-radius, radius, -radius, radius}, spec);
    CHECK(total.value == Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("marginal is a centered normal with variance cosh(2r)/2") {
    for (double r : {0.5, 1.0}) {
      const SqueezeState s(r);
      const double var = s.cosh2r() / 2;
      const double span = 12.0 * std::sqrt(var);
      for (double q : {-1.0, 0.0, 1.0}) {
        const double m = integrate_line([&](double y) { return joint_density(q, y, s); }, -span,
                                        span, 0.25);
        const double normal = std::exp(-q * q / (2 * var)) / std::sqrt(2 * kPi * var);
        CHECK(std::abs(m - normal) < 1e-8);
      }
    }
  }

  TEST_CASE("large-l asymptote") {
    CHECK(czz_asymptote(SqueezeState(0)) == 0.0);
    CHECK(czz_asymptote(SqueezeState(1)) == Approx(0.8287).epsilon(1e-4));
    CHECK(czz_asymptote(SqueezeState(2)) == Approx(0.9767).epsilon(1e-4));
    for (double r = 0.0; r <= 5.0; r += 0.25) {
      CHECK(std::abs(czz_asymptote(SqueezeState(r)) - verify::czz_limit_from_orthants(r)) < 1e-12);
      CHECK(std::abs(czz_asymptote(SqueezeState(r)) -
                     2 / kPi * std::asin(std::tanh(2 * r))) < 1e-12);
    }
  }

  TEST_CASE("closed-form Gaussian integrands match direct evaluation") {
    const SqueezeState s(1.3);
    const auto dens = density_integrand(s);
    CHECK(dens.total_mass() == Approx(1.0).epsilon(1e-14));
    const Vec2 shift{0.7, -0.4};
    const auto prod = shifted_product_integrand(s, shift);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
      const double x = u(rng), y = u(rng);
      CHECK(dens(x, y) == Approx(joint_density(x, y, s)).epsilon(1e-12));
      CHECK(prod(x, y) ==
            Approx(wavefunction(x, y, s) * wavefunction(x + shift[0], y + shift[1], s))
                .epsilon(1e-11));
    }
  }
}
