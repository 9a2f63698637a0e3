#include "boxspin/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "boxspin/errors.hpp"

namespace boxspin {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) noexcept {
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  return w - kPi;
}

}  // namespace

ChshSettings ChshSettings::standard() noexcept { return {0.0, kPi / 2, kPi / 4, -kPi / 4}; }

ChshSettings ChshSettings::wrapped() const noexcept {
  return {wrap_angle(alpha), wrap_angle(beta), wrap_angle(gamma), wrap_angle(delta)};
}

AngleCorrelator spin_correlator(const CorrelatorSet& set) {
  return [set](double a, double g) { return rotated_correlator(a, g, set); };
}

BellReport chsh_value(const AngleCorrelator& e, const ChshSettings& s) {
  BellReport report;
  report.e_ag = e(s.alpha, s.gamma);
  report.e_ad = e(s.alpha, s.delta);
  report.e_bg = e(s.beta, s.gamma);
  report.e_bd = e(s.beta, s.delta);
  report.value = std::abs(report.e_ag + report.e_ad) + std::abs(report.e_bg - report.e_bd);
  report.bound = 2.0;
  report.violated = report.value > report.bound;
  return report;
}

BellReport chsh_value(const CorrelatorSet& set, const ChshSettings& s) {
  return chsh_value(spin_correlator(set), s);
}

BellReport bit_bell_value(const AngleCorrelator& e_xor, const ChshSettings& s) {
  BellReport report;
  report.e_ag = e_xor(s.alpha, s.gamma);
  report.e_ad = e_xor(s.alpha, s.delta);
  report.e_bg = e_xor(s.beta, s.gamma);
  report.e_bd = e_xor(s.beta, s.delta);
  for (double v : {report.e_ag, report.e_ad, report.e_bg, report.e_bd}) {
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
      throw Error(ErrorKind::RangeError, "XOR expectation outside [0, 1]: " + std::to_string(v));
    }
  }
  report.value =
      std::abs(report.e_ag + report.e_ad - 1.0) + std::abs(report.e_bg - report.e_bd);
  report.bound = 1.0;
  report.violated = report.value > report.bound;
  return report;
}

BellReport bit_bell_value(const CorrelatorSet& set, const ChshSettings& s) {
  return bit_bell_value(
      [&set](double a, double g) { return xor_expectation(rotated_correlator(a, g, set)); }, s);
}

MultibitReport multibit_value(const std::map<int, double>& per_bit, TruncationWindow window) {
  window.validate();
  MultibitReport report;
  for (int k = window.k_lo; k <= window.k_hi; ++k) {
    auto it = per_bit.find(k);
    if (it == per_bit.end()) {
      throw Error(ErrorKind::RangeError, "no bit-level value for k = " + std::to_string(k));
    }
    const double weight = std::ldexp(1.0, k);
    report.per_bit[k] = it->second;
    report.weights[k] = weight;
    report.value += weight * it->second;
  }
  report.bound = lhv_multibit_bound(window);
  report.violated = report.value > report.bound;
  return report;
}

std::vector<LhvStrategy> enumerate_lhv_strategies() {
  std::vector<LhvStrategy> out;
  out.reserve(16);
  for (int mask = 0; mask < 16; ++mask) {
    LhvStrategy s;
    for (int i = 0; i < 4; ++i) s.outcomes[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1 : 1;
    const auto [sa, sb, sg, sd] = s.outcomes;
    s.chsh = std::abs(sa * sg + sa * sd) + std::abs(sb * sg - sb * sd);
    out.push_back(s);
  }
  return out;
}

double lhv_chsh_max() {
  const auto strategies = enumerate_lhv_strategies();
  return std::max_element(strategies.begin(), strategies.end(),
                          [](const LhvStrategy& a, const LhvStrategy& b) { return a.chsh < b.chsh; })
      ->chsh;
}

double lhv_bit_max() {
  double best = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    const int ba = mask & 1;
    const int bb = (mask >> 1) & 1;
    const int bg = (mask >> 2) & 1;
    const int bd = (mask >> 3) & 1;
    const double value = std::abs((ba ^ bg) + (ba ^ bd) - 1) + std::abs((bb ^ bg) - (bb ^ bd));
    best = std::max(best, value);
  }
  return best;
}

double lhv_multibit_bound(TruncationWindow window) {
  return window.weight_sum() * lhv_bit_max();
}

// ------------------------------------------------------------- optimization

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, double step, double tolerance,
                                int max_iterations) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step;
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  auto point = [dim](const std::vector<double>& base, const std::vector<double>& towards,
                     double t) {
    std::vector<double> p(dim);
    for (std::size_t k = 0; k < dim; ++k) p[k] = base[k] + t * (towards[k] - base[k]);
    return p;
  };

  for (int iter = 0; iter < max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    double size = 0.0;
    for (std::size_t i = 0; i <= dim; ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]));
      }
    }
    if (values[worst] - values[best] <= tolerance && size <= std::sqrt(tolerance)) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / static_cast<double>(dim);
    }

    const std::vector<double> reflected = point(centroid, simplex[worst], -1.0);
    const double f_reflected = f(reflected);
    if (f_reflected < values[best]) {
      const std::vector<double> expanded = point(centroid, simplex[worst], -2.0);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const std::vector<double> contracted =
        outside ? point(centroid, reflected, 0.5) : point(centroid, simplex[worst], 0.5);
    const double f_contracted = f(contracted);
    if (f_contracted < std::min(f_reflected, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      simplex[i] = point(simplex[best], simplex[i], 0.5);
      values[i] = f(simplex[i]);
    }
  }
  const auto it = std::min_element(values.begin(), values.end());
  return simplex[static_cast<std::size_t>(it - values.begin())];
}

namespace {

// Polishes with shrinking restarts; abs() kinks can stall a single simplex.
std::vector<double> minimize_with_restarts(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
    const OptimizeOptions& options) {
  double step = kPi / 8;
  for (int round = 0; round < 4; ++round) {
    x = nelder_mead(f, x, step, options.tolerance, options.max_iterations);
    step *= 0.1;
  }
  return x;
}

bool lexicographically_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

OptimizeResult optimize_settings(const CorrelatorSet& set, const OptimizeOptions& options) {
  const AngleCorrelator e = spin_correlator(set);
  auto objective = [&e](const std::vector<double>& x) {
    return -chsh_value(e, ChshSettings{x[0], x[1], x[2], x[3]}).value;
  };

  const ChshSettings standard = ChshSettings::standard();
  OptimizeResult result;
  result.standard_value = chsh_value(e, standard).value;
  result.settings = standard;
  result.value = result.standard_value;

  std::vector<double> best_x;
  double best_value = -1.0;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<double> start{standard.alpha, standard.beta, standard.gamma, standard.delta};
    for (std::size_t i = 0; i < 4; ++i) {
      if ((mask >> i) & 1) start[i] += kPi / 8;
    }
    std::vector<double> x = minimize_with_restarts(objective, start, options);
    const ChshSettings wrapped = ChshSettings{x[0], x[1], x[2], x[3]}.wrapped();
    x = {wrapped.alpha, wrapped.beta, wrapped.gamma, wrapped.delta};
    const double value = -objective(x);
    if (value > best_value || (value == best_value && lexicographically_less(x, best_x))) {
      best_value = value;
      best_x = x;
    }
  }
  if (best_value > result.value) {
    result.value = best_value;
    result.settings = ChshSettings{best_x[0], best_x[1], best_x[2], best_x[3]};
  }
  return result;
}

namespace {

std::array<double, 3> direction(double theta, double phi) noexcept {
  // (x, y, z) components.
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace

ExtendedOptimizeResult optimize_settings_extended(const CorrelatorSet& set,
                                                  const OptimizeOptions& options) {
  // Rows: site-one axis (x, y, z); columns: site-two axis.
  const double tensor[3][3] = {
      {set.cxx, 0.0, set.cxz}, {0.0, set.cyy, 0.0}, {set.czx, 0.0, set.czz}};
  auto correlation = [&tensor](double t1, double p1, double t2, double p2) {
    const auto u = direction(t1, p1);
    const auto v = direction(t2, p2);
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) total += u[i] * tensor[i][j] * v[j];
    }
    return total;
  };
  auto chsh = [&correlation](const std::vector<double>& x) {
    const double ag = correlation(x[0], x[1], x[4], x[5]);
    const double ad = correlation(x[0], x[1], x[6], x[7]);
    const double bg = correlation(x[2], x[3], x[4], x[5]);
    const double bd = correlation(x[2], x[3], x[6], x[7]);
    return std::abs(ag + ad) + std::abs(bg - bd);
  };
  auto objective = [&chsh](const std::vector<double>& x) { return -chsh(x); };

  const ChshSettings standard = ChshSettings::standard();
  std::vector<double> best_x;
  double best_value = -1.0;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<double> start(8, 0.0);
    const auto angles = standard.as_array();
    for (std::size_t s = 0; s < 4; ++s) {
      start[2 * s] = angles[s];
      start[2 * s + 1] = ((mask >> s) & 1) ? kPi / 2 : 0.0;
    }
    std::vector<double> x = minimize_with_restarts(objective, start, options);
    const double value = chsh(x);
    if (value > best_value || (value == best_value && lexicographically_less(x, best_x))) {
      best_value = value;
      best_x = x;
    }
  }
  ExtendedOptimizeResult result;
  for (std::size_t s = 0; s < 4; ++s) {
    result.settings[s] = {best_x[2 * s], best_x[2 * s + 1]};
  }
  result.value = best_value;
  return result;
}

}  // namespace boxspin
