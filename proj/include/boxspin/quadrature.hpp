#pragma once

// Gauss-Legendre tensor-product panels over rectangles, and signed sums of
// rectangle integrals over the l x l box lattice.
//
// Every rectangle is split into panels no wider than max_panel_width. Each
// panel is integrated at panel_order and at panel_order/2 nodes per axis;
// the per-panel differences give the error estimate. If the estimate exceeds
// abs_tol the panels are halved and the rectangle is redone (bounded number
// of times), so results are deterministic for a given spec.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "boxspin/errors.hpp"
#include "boxspin/gaussian_state.hpp"

namespace boxspin {

struct QuadratureSpec {
  int panel_order = 20;
  /// <= 0 means "let the caller pick" (correlators use min(l, sigma_min/2)).
  double max_panel_width = 0.0;
  /// <= 0 means "let the caller pick" (see default_tail_radius).
  double tail_radius = 0.0;
  double abs_tol = 1e-7;

  /// Throws Error(InvalidState) on panel_order < 2, abs_tol <= 0, or a
  /// non-positive width/radius that has not been filled in.
  void validate() const;
  /// Stable hash of all fields, used for result caching.
  std::uint64_t hash() const noexcept;

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t panels_used = 0;

  IntegralResult& operator+=(const IntegralResult& other) noexcept {
    value += other.value;
    error_estimate += other.error_estimate;
    panels_used += other.panels_used;
    return *this;
  }
};

struct Rect {
  double x0, x1, y0, y1;
};

/// Nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (>= 1); thread-safe.
const GaussLegendreRule& gauss_legendre(int order);

/// Tail radius used when spec.tail_radius is unset: max(8 sigma_major, 3l),
/// with sigma_major the standard deviation of psi^2 along its long axis.
double default_tail_radius(const SqueezeState& state, double l) noexcept;

/// Panel width used when spec.max_panel_width is unset: min(l, sigma_min/2).
double default_panel_width(const SqueezeState& state, double l) noexcept;

/// Copy of `spec` with tail radius and panel width filled in for (state, l).
QuadratureSpec resolve_spec(QuadratureSpec spec, const SqueezeState& state, double l);

namespace detail {

template <class F>
double panel_sum(const F& f, double x0, double x1, double y0, double y1,
                 const GaussLegendreRule& rule) {
  const double hx = 0.5 * (x1 - x0);
  const double hy = 0.5 * (y1 - y0);
  const double mx = 0.5 * (x0 + x1);
  const double my = 0.5 * (y0 + y1);
  const std::size_t n = rule.nodes.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = mx + hx * rule.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = f(x, my + hy * rule.nodes[j]);
      row += rule.weights[j] * v;
    }
    total += rule.weights[i] * row;
  }
  return total * hx * hy;
}

}  // namespace detail

/// Integrates f over rect. Throws Error(NonFiniteIntegrand) if f produces a
/// non-finite value, Error(InvalidState) on an empty rectangle or bad spec.
template <class F>
IntegralResult integrate_rect(const F& f, const Rect& rect, const QuadratureSpec& spec) {
  spec.validate();
  if (!(rect.x0 < rect.x1) || !(rect.y0 < rect.y1)) {
    throw Error(ErrorKind::InvalidState, "integrate_rect needs a < b and c < d");
  }
  if (!(spec.max_panel_width > 0.0)) {
    throw Error(ErrorKind::InvalidState, "integrate_rect needs max_panel_width > 0");
  }
  const GaussLegendreRule& fine = gauss_legendre(spec.panel_order);
  const GaussLegendreRule& coarse = gauss_legendre(spec.panel_order / 2);
  double width = spec.max_panel_width;
  IntegralResult result;
  constexpr int kMaxRefinements = 6;
  for (int pass = 0; pass <= kMaxRefinements; ++pass) {
    const auto nx = static_cast<std::size_t>(std::ceil((rect.x1 - rect.x0) / width));
    const auto ny = static_cast<std::size_t>(std::ceil((rect.y1 - rect.y0) / width));
    const double dx = (rect.x1 - rect.x0) / static_cast<double>(nx);
    const double dy = (rect.y1 - rect.y0) / static_cast<double>(ny);
    double value = 0.0;
    double diff = 0.0;
    double magnitude = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      const double a = rect.x0 + dx * static_cast<double>(i);
      const double b = (i + 1 == nx) ? rect.x1 : a + dx;
      for (std::size_t j = 0; j < ny; ++j) {
        const double c = rect.y0 + dy * static_cast<double>(j);
        const double d = (j + 1 == ny) ? rect.y1 : c + dy;
        const double hi = detail::panel_sum(f, a, b, c, d, fine);
        const double lo = detail::panel_sum(f, a, b, c, d, coarse);
        value += hi;
        diff += std::abs(hi - lo);
        magnitude += std::abs(hi);
      }
    }
    if (!std::isfinite(value) || !std::isfinite(diff)) {
      throw Error(ErrorKind::NonFiniteIntegrand, "integrand produced a non-finite value");
    }
    result.value = value;
    // Roundoff floor so that a converged panel never reports exactly zero.
    result.error_estimate = diff + 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
    result.panels_used += nx * ny;
    if (result.error_estimate <= spec.abs_tol) break;
    width *= 0.5;
  }
  return result;
}

/// Type-erased overload.
IntegralResult integrate_rect(const std::function<double(double, double)>& f, const Rect& rect,
                              const QuadratureSpec& spec);

/// Coefficient of box pair (n, m), where box n is [n l, n l + l).
using LatticeSign = std::function<int(std::int64_t n, std::int64_t m)>;

/// Sum over box pairs (n, m) of sign(n, m) * integral of f over box n x box m.
///
/// Box pairs whose rectangle lies outside the disc of radius
/// spec.tail_radius, or whose Mahalanobis distance from the Gaussian's center
/// is so large that their mass is below ~1e-18, are dropped. The reported
/// error includes a chi-square tail bound for everything dropped.
/// Throws Error(InvalidScale) for l <= 0 and propagates NonFiniteIntegrand.
IntegralResult integrate_lattice_signed(const GaussianIntegrand& f, double l,
                                        const LatticeSign& sign, const QuadratureSpec& spec);

/// Generic-integrand version: disc truncation only; `dropped_mass_bound` is
/// the caller's bound on |f| mass outside the disc and is added to the error.
IntegralResult integrate_lattice_signed(const std::function<double(double, double)>& f,
                                        double l, const LatticeSign& sign,
                                        const QuadratureSpec& spec,
                                        double dropped_mass_bound = 0.0);

/// 1D Gauss-Legendre panels over [a, b]; used for marginal checks.
double integrate_line(const std::function<double(double)>& f, double a, double b,
                      double max_panel_width, int order = 20);

}  // namespace boxspin
