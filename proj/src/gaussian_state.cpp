#include "boxspin/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "boxspin/errors.hpp"

namespace boxspin {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorKind::InvalidScale: return "InvalidScale";
    case ErrorKind::MisalignedGrid: return "MisalignedGrid";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::RangeError: return "RangeError";
  }
  return "Unknown";
}

SqueezeState::SqueezeState(double r) : r_(r) {
  if (!std::isfinite(r) || r < 0.0 || r > kMaxSqueezing) {
    throw Error(ErrorKind::InvalidState,
                "squeezing r must lie in [0, " + std::to_string(kMaxSqueezing) + "], got " +
                    std::to_string(r));
  }
  cosh2r_ = std::cosh(2.0 * r);
  sinh2r_ = std::sinh(2.0 * r);
  rho_ = std::tanh(2.0 * r);
}

double SqueezeState::sigma() const noexcept { return std::sqrt(sigma2()); }

double SqueezeState::sigma_min() const noexcept {
  return std::exp(-r_) / std::numbers::sqrt2;
}

double wavefunction(double q, double q2, const SqueezeState& s) noexcept {
  const double exponent = q * q2 * s.sinh2r() - 0.5 * (q * q + q2 * q2) * s.cosh2r();
  return std::exp(exponent) / std::sqrt(std::numbers::pi);
}

double joint_density(double q, double q2, const SqueezeState& s) noexcept {
  const double exponent = 2.0 * q * q2 * s.sinh2r() - (q * q + q2 * q2) * s.cosh2r();
  return std::exp(exponent) * std::numbers::inv_pi;
}

double czz_asymptote(const SqueezeState& s) noexcept {
  return 2.0 * std::numbers::inv_pi * std::atan(s.sinh2r());
}

double GaussianIntegrand::mahalanobis2(double x, double y) const noexcept {
  const double dx = x - center[0];
  const double dy = y - center[1];
  return p11 * dx * dx + 2.0 * p12 * dx * dy + p22 * dy * dy;
}

double GaussianIntegrand::operator()(double x, double y) const noexcept {
  return weight * std::exp(-0.5 * mahalanobis2(x, y));
}

double GaussianIntegrand::total_mass() const noexcept {
  const double det = p11 * p22 - p12 * p12;
  return weight * 2.0 * std::numbers::pi / std::sqrt(det);
}

double GaussianIntegrand::min_mahalanobis2(double a, double b, double c,
                                           double d) const noexcept {
  const double x0 = center[0];
  const double y0 = center[1];
  if (a <= x0 && x0 <= b && c <= y0 && y0 <= d) return 0.0;
  // Convex quadratic with the minimizer outside the rectangle: the minimum is
  // on the boundary, and along each edge it is the clamped 1D minimizer.
  double best = mahalanobis2(a, c);
  for (double x : {a, b}) {
    const double y = std::clamp(y0 - p12 / p22 * (x - x0), c, d);
    best = std::min(best, mahalanobis2(x, y));
  }
  for (double y : {c, d}) {
    const double x = std::clamp(x0 - p12 / p11 * (y - y0), a, b);
    best = std::min(best, mahalanobis2(x, y));
  }
  return best;
}

namespace {

// psi = pi^{-1/2} exp(-x^T A x / 2) with A = [[c, -s], [-s, c]].
double quadratic_a(const SqueezeState& st, Vec2 v) noexcept {
  return st.cosh2r() * (v[0] * v[0] + v[1] * v[1]) - 2.0 * st.sinh2r() * v[0] * v[1];
}

}  // namespace

GaussianIntegrand density_integrand(const SqueezeState& state) noexcept {
  return shifted_product_integrand(state, {0.0, 0.0});
}

GaussianIntegrand shifted_product_integrand(const SqueezeState& state, Vec2 shift) noexcept {
  // psi(x) psi(x+s) = pi^{-1} exp(-(x + s/2)^T A (x + s/2) - s^T A s / 4)
  GaussianIntegrand g;
  g.center = {-0.5 * shift[0], -0.5 * shift[1]};
  g.p11 = 2.0 * state.cosh2r();
  g.p22 = 2.0 * state.cosh2r();
  g.p12 = -2.0 * state.sinh2r();
  g.weight = std::numbers::inv_pi * std::exp(-0.25 * quadratic_a(state, shift));
  return g;
}

}  // namespace boxspin
