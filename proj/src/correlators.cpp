#include "boxspin/correlators.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>

#include "boxspin/errors.hpp"

namespace boxspin {

std::string_view to_string(SpinPair pair) noexcept {
  switch (pair) {
    case SpinPair::ZZ: return "ZZ";
    case SpinPair::XX: return "XX";
    case SpinPair::YY: return "YY";
    case SpinPair::ZX: return "ZX";
    case SpinPair::XZ: return "XZ";
  }
  return "?";
}

CorrelatorSet CorrelatorSet::synthetic(double czz, double cxx, double cyy, double czx,
                                       double cxz) {
  CorrelatorSet set;
  set.czz = czz;
  set.cxx = cxx;
  set.cyy = cyy;
  set.czx = czx;
  set.cxz = cxz;
  return set;
}

CorrelatorCache::Key CorrelatorCache::make_key(SpinPair pair, double l, double r,
                                               const QuadratureSpec& spec) {
  return {static_cast<int>(pair), std::bit_cast<std::uint64_t>(l),
          std::bit_cast<std::uint64_t>(r), spec.hash()};
}

std::optional<Correlation> CorrelatorCache::find(SpinPair pair, double l, double r,
                                                 const QuadratureSpec& spec) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(make_key(pair, l, r, spec));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CorrelatorCache::insert(SpinPair pair, double l, double r, const QuadratureSpec& spec,
                             Correlation value) {
  std::unique_lock lock(mutex_);
  entries_.emplace(make_key(pair, l, r, spec), value);
}

std::size_t CorrelatorCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

namespace {

enum class Local { Z, X, Y, I };

// Action of one site's operator on box parity p (0 even, 1 odd): the real
// coefficient and the shift. For Y the coefficient is -i sigma; only pairs
// of Y appear, so the two -i factors are folded into the pair sign.
struct LocalAction {
  double coefficient;
  double shift;
};

LocalAction local_action(Local op, int parity, double l) noexcept {
  const double sigma = parity == 0 ? 1.0 : -1.0;
  switch (op) {
    case Local::Z: return {sigma, 0.0};
    case Local::X: return {1.0, sigma * l};
    case Local::Y: return {sigma, sigma * l};
    case Local::I: return {1.0, 0.0};
  }
  return {0.0, 0.0};
}

int parity_of(std::int64_t n) noexcept { return static_cast<int>(n & 1); }

Correlation lattice_expectation(Local a, Local b, double l, const SqueezeState& state,
                                const QuadratureSpec& spec) {
  // (-i)^2 from a pair of Y operators; Y is never paired with a real axis.
  const double pair_phase = (a == Local::Y && b == Local::Y) ? -1.0 : 1.0;
  Correlation out;
  for (int pa = 0; pa < 2; ++pa) {
    for (int pb = 0; pb < 2; ++pb) {
      const LocalAction act_a = local_action(a, pa, l);
      const LocalAction act_b = local_action(b, pb, l);
      const double coefficient = pair_phase * act_a.coefficient * act_b.coefficient;
      const int sign = coefficient > 0.0 ? 1 : (coefficient < 0.0 ? -1 : 0);
      if (sign == 0) continue;
      const GaussianIntegrand g =
          shifted_product_integrand(state, {act_a.shift, act_b.shift});
      const IntegralResult part = integrate_lattice_signed(
          g, l,
          [pa, pb, sign](std::int64_t n, std::int64_t m) {
            return (parity_of(n) == pa && parity_of(m) == pb) ? sign : 0;
          },
          spec);
      out.value += part.value;
      out.error += part.error_estimate;
    }
  }
  return out;
}

void check_scale(double l) {
  if (!(l > 0.0) || !std::isfinite(l)) {
    throw Error(ErrorKind::InvalidScale, "box length l must be positive, got " + std::to_string(l));
  }
}

}  // namespace

Correlation correlator(SpinPair pair, double l, double r, const QuadratureSpec& spec,
                       CorrelatorCache* cache) {
  check_scale(l);
  const SqueezeState state(r);
  if (cache != nullptr) {
    if (auto hit = cache->find(pair, l, r, spec)) return *hit;
  }
  const QuadratureSpec resolved = resolve_spec(spec, state, l);
  Correlation result;
  switch (pair) {
    case SpinPair::ZZ: result = lattice_expectation(Local::Z, Local::Z, l, state, resolved); break;
    case SpinPair::XX: result = lattice_expectation(Local::X, Local::X, l, state, resolved); break;
    case SpinPair::YY: result = lattice_expectation(Local::Y, Local::Y, l, state, resolved); break;
    case SpinPair::ZX: result = lattice_expectation(Local::Z, Local::X, l, state, resolved); break;
    case SpinPair::XZ: result = lattice_expectation(Local::X, Local::Z, l, state, resolved); break;
  }
  if (cache != nullptr) cache->insert(pair, l, r, spec, result);
  return result;
}

Correlation single_site(SiteAxis axis, double l, double r, const QuadratureSpec& spec) {
  check_scale(l);
  const SqueezeState state(r);
  const QuadratureSpec resolved = resolve_spec(spec, state, l);
  if (axis == SiteAxis::X) {
    return lattice_expectation(Local::X, Local::I, l, state, resolved);
  }

  // Z: signed box sum of the marginal, a centered normal with variance c/2.
  const double var = state.sigma2();
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
  auto marginal = [var, norm](double q) { return norm * std::exp(-0.5 * q * q / var); };
  const double radius = resolved.tail_radius;
  const double width = std::min(l, 0.5 * state.sigma());
  const auto lo = static_cast<std::int64_t>(std::floor(-radius / l));
  const auto hi = static_cast<std::int64_t>(std::floor(radius / l));
  Correlation out;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const double a = static_cast<double>(n) * l;
    const double fine = integrate_line(marginal, a, a + l, width, resolved.panel_order);
    const double coarse = integrate_line(marginal, a, a + l, width, resolved.panel_order / 2);
    const double sign = parity_of(n) == 0 ? 1.0 : -1.0;
    out.value += sign * fine;
    out.error += std::abs(fine - coarse) + 64.0 * std::numeric_limits<double>::epsilon() * fine;
  }
  // Mass beyond |q| > (hi+1) l or below lo l.
  const double reach = std::min(static_cast<double>(hi + 1) * l, -static_cast<double>(lo) * l);
  out.error += std::erfc(reach / std::sqrt(2.0 * var));
  return out;
}

CorrelatorSet correlator_set(double l, double r, const QuadratureSpec& spec,
                             CorrelatorCache* cache) {
  CorrelatorSet set;
  set.l = l;
  set.r = r;
  const Correlation zz = correlator(SpinPair::ZZ, l, r, spec, cache);
  const Correlation xx = correlator(SpinPair::XX, l, r, spec, cache);
  const Correlation yy = correlator(SpinPair::YY, l, r, spec, cache);
  const Correlation zx = correlator(SpinPair::ZX, l, r, spec, cache);
  const Correlation xz = correlator(SpinPair::XZ, l, r, spec, cache);
  set.czz = zz.value;
  set.cxx = xx.value;
  set.cyy = yy.value;
  set.czx = zx.value;
  set.cxz = xz.value;
  set.errs = {zz.error, xx.error, yy.error, zx.error, xz.error};
  return set;
}

double rotated_correlator(double alpha, double gamma, const CorrelatorSet& set) noexcept {
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  const double cg = std::cos(gamma);
  const double sg = std::sin(gamma);
  return ca * cg * set.czz + ca * sg * set.czx + sa * cg * set.cxz + sa * sg * set.cxx;
}

SampledEstimate czz_sampled(double l, double r, std::uint64_t n_samples, std::uint64_t seed) {
  check_scale(l);
  if (n_samples < 1000) {
    throw Error(ErrorKind::InvalidState, "czz_sampled needs at least 1000 samples");
  }
  const SqueezeState state(r);
  const double c = state.cosh2r();
  const double s = state.sinh2r();
  // Cholesky factor of (1/2)[[c, s], [s, c]].
  const double l11 = std::sqrt(0.5 * c);
  const double l21 = s / std::sqrt(2.0 * c);
  const double l22 = 1.0 / std::sqrt(2.0 * c);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uint64_t agree = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    const double q = l11 * z1;
    const double q2 = l21 * z1 + l22 * z2;
    const auto n = static_cast<std::int64_t>(std::floor(q / l));
    const auto m = static_cast<std::int64_t>(std::floor(q2 / l));
    if (((n + m) & 1) == 0) ++agree;
  }
  const double count = static_cast<double>(n_samples);
  const double p = static_cast<double>(agree) / count;
  SampledEstimate out;
  out.estimate = 2.0 * p - 1.0;
  // Values are +-1: variance = 1 - mean^2, with Bessel's correction.
  const double variance = (1.0 - out.estimate * out.estimate) * count / (count - 1.0);
  out.std_error = std::sqrt(std::max(variance, 0.0) / count);
  return out;
}

}  // namespace boxspin
