#include "boxspin/quadrature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace boxspin {

void QuadratureSpec::validate() const {
  if (panel_order < 2) {
    throw Error(ErrorKind::InvalidState, "panel_order must be >= 2");
  }
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
    throw Error(ErrorKind::InvalidState, "abs_tol must be positive");
  }
  if (!std::isfinite(max_panel_width) || !std::isfinite(tail_radius)) {
    throw Error(ErrorKind::InvalidState, "panel width and tail radius must be finite");
  }
}

std::uint64_t QuadratureSpec::hash() const noexcept {
  // FNV-1a over the field bit patterns.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(panel_order));
  mix(std::bit_cast<std::uint64_t>(max_panel_width));
  mix(std::bit_cast<std::uint64_t>(tail_radius));
  mix(std::bit_cast<std::uint64_t>(abs_tol));
  return h;
}

namespace {

GaussLegendreRule compute_rule(int order) {
  GaussLegendreRule rule;
  if (order == 1) return {{0.0}, {2.0}};
  const auto n = static_cast<std::size_t>(order);
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorKind::InvalidState, "Gauss-Legendre order must be >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(compute_rule(order));
  return *slot;
}

double default_tail_radius(const SqueezeState& state, double l) noexcept {
  const double sigma_major = std::sqrt(0.5 * (state.cosh2r() + state.sinh2r()));
  return std::max(8.0 * sigma_major, 3.0 * l);
}

double default_panel_width(const SqueezeState& state, double l) noexcept {
  return std::min(l, 0.5 * state.sigma_min());
}

QuadratureSpec resolve_spec(QuadratureSpec spec, const SqueezeState& state, double l) {
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw Error(ErrorKind::InvalidScale, "box length l must be positive, got " + std::to_string(l));
  }
  if (!(spec.tail_radius > 0.0)) spec.tail_radius = default_tail_radius(state, l);
  if (!(spec.max_panel_width > 0.0)) spec.max_panel_width = default_panel_width(state, l);
  spec.validate();
  return spec;
}

IntegralResult integrate_rect(const std::function<double(double, double)>& f, const Rect& rect,
                              const QuadratureSpec& spec) {
  return integrate_rect<std::function<double(double, double)>>(f, rect, spec);
}

namespace {

double distance_to_rect(double a, double b, double c, double d) noexcept {
  const double dx = std::max({a, 0.0, -b});
  const double dy = std::max({c, 0.0, -d});
  return std::hypot(dx, dy);
}

struct BoxRange {
  std::int64_t lo;
  std::int64_t hi;
};

// Boxes [n l, n l + l) meeting the open interval (lo, hi).
BoxRange boxes_meeting(double lo, double hi, double l) noexcept {
  return {static_cast<std::int64_t>(std::floor(lo / l)),
          static_cast<std::int64_t>(std::floor(hi / l))};
}

void check_lattice_args(double l, const QuadratureSpec& spec) {
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw Error(ErrorKind::InvalidScale, "box length l must be positive, got " + std::to_string(l));
  }
  spec.validate();
  if (!(spec.tail_radius > 0.0) || !(spec.max_panel_width > 0.0)) {
    throw Error(ErrorKind::InvalidState,
                "lattice summation needs tail_radius and max_panel_width set");
  }
}

}  // namespace

IntegralResult integrate_lattice_signed(const GaussianIntegrand& f, double l,
                                        const LatticeSign& sign, const QuadratureSpec& spec) {
  check_lattice_args(l, spec);
  const double radius = spec.tail_radius;
  const double mass = std::abs(f.total_mass());
  constexpr double kPrunedMass = 1e-18;
  const double threshold = mass > kPrunedMass ? 2.0 * std::log(mass / kPrunedMass) : 0.0;

  // Along a column at fixed x the quadratic form is p22 (y - y*(x))^2 + ...,
  // so M^2 <= threshold needs |y - y*(x)| <= sqrt(threshold / p22).
  const double half_band = std::sqrt(threshold / f.p22);
  auto conditional_y = [&f](double x) { return f.center[1] - f.p12 / f.p22 * (x - f.center[0]); };

  IntegralResult total;
  const BoxRange rows = boxes_meeting(-radius, radius, l);
  for (std::int64_t n = rows.lo; n <= rows.hi; ++n) {
    const double a = static_cast<double>(n) * l;
    const double b = a + l;
    const double y_a = conditional_y(a);
    const double y_b = conditional_y(b);
    const double lo = std::max(-radius, std::min(y_a, y_b) - half_band);
    const double hi = std::min(radius, std::max(y_a, y_b) + half_band);
    if (lo > hi) continue;
    const BoxRange cols = boxes_meeting(lo, hi, l);
    for (std::int64_t m = cols.lo; m <= cols.hi; ++m) {
      const int coefficient = sign(n, m);
      if (coefficient == 0) continue;
      const double c = static_cast<double>(m) * l;
      const double d = c + l;
      if (distance_to_rect(a, b, c, d) > radius) continue;
      if (f.min_mahalanobis2(a, b, c, d) > threshold) continue;
      IntegralResult box = integrate_rect(f, Rect{a, b, c, d}, spec);
      box.value *= coefficient;
      box.error_estimate *= std::abs(coefficient);
      total += box;
    }
  }

  // Dropped mass: outside the disc every point is at least (R - |mu|) from
  // the center, i.e. Mahalanobis^2 >= lambda_min (R - |mu|)^2; the pruned
  // boxes lie in M^2 > threshold. For a 2D Gaussian P(M^2 > t) = exp(-t/2).
  const double half_trace = 0.5 * (f.p11 + f.p22);
  const double lambda_min =
      half_trace - std::sqrt(0.25 * (f.p11 - f.p22) * (f.p11 - f.p22) + f.p12 * f.p12);
  const double gap = std::max(0.0, radius - std::hypot(f.center[0], f.center[1]));
  const double outside_disc = mass * std::exp(-0.5 * lambda_min * gap * gap);
  const double pruned = mass * std::exp(-0.5 * threshold);
  total.error_estimate += outside_disc + pruned;
  return total;
}

IntegralResult integrate_lattice_signed(const std::function<double(double, double)>& f,
                                        double l, const LatticeSign& sign,
                                        const QuadratureSpec& spec, double dropped_mass_bound) {
  check_lattice_args(l, spec);
  const double radius = spec.tail_radius;
  IntegralResult total;
  const BoxRange range = boxes_meeting(-radius, radius, l);
  for (std::int64_t n = range.lo; n <= range.hi; ++n) {
    const double a = static_cast<double>(n) * l;
    for (std::int64_t m = range.lo; m <= range.hi; ++m) {
      const int coefficient = sign(n, m);
      if (coefficient == 0) continue;
      const double c = static_cast<double>(m) * l;
      if (distance_to_rect(a, a + l, c, c + l) > radius) continue;
      IntegralResult box = integrate_rect(f, Rect{a, a + l, c, c + l}, spec);
      box.value *= coefficient;
      box.error_estimate *= std::abs(coefficient);
      total += box;
    }
  }
  total.error_estimate += std::abs(dropped_mass_bound);
  return total;
}

double integrate_line(const std::function<double(double)>& f, double a, double b,
                      double max_panel_width, int order) {
  const GaussLegendreRule& rule = gauss_legendre(order);
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel_width));
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      sum += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    }
    total += 0.5 * h * sum;
  }
  return total;
}

}  // namespace boxspin
