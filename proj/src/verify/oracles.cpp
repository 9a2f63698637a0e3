#include "boxspin/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "boxspin/boxops.hpp"
#include "boxspin/errors.hpp"

namespace boxspin::verify {

namespace {
constexpr double kPi = std::numbers::pi;
}

double orthant_probability(double rho) noexcept { return 0.25 + std::asin(rho) / (2.0 * kPi); }

double czz_limit_from_orthants(double r) noexcept {
  const double same = orthant_probability(std::tanh(2.0 * r));
  return 2.0 * same - 2.0 * (0.5 - same);
}

double chsh_max_from_tensor(const CorrelatorSet& set) noexcept {
  // c + d and c - d are orthogonal with norms 2 cos t and 2 sin t, so the
  // maximum over a, b is 2 (cos t |T u| + sin t |T v|) for an orthonormal
  // basis u, v of the plane; maximizing over t gives 2 |T|_F.
  const double a = set.czz, b = set.czx, c = set.cxz, d = set.cxx;
  return 2.0 * std::sqrt(a * a + b * b + c * c + d * d);
}

namespace {

double bilinear(double alpha, double gamma, const CorrelatorSet& s) noexcept {
  return std::cos(alpha) * std::cos(gamma) * s.czz + std::cos(alpha) * std::sin(gamma) * s.czx +
         std::sin(alpha) * std::cos(gamma) * s.cxz + std::sin(alpha) * std::sin(gamma) * s.cxx;
}

double chsh_direct(const std::array<double, 4>& x, const CorrelatorSet& s) noexcept {
  return std::abs(bilinear(x[0], x[2], s) + bilinear(x[0], x[3], s)) +
         std::abs(bilinear(x[1], x[2], s) - bilinear(x[1], x[3], s));
}

}  // namespace

GridSearchResult grid_search_chsh(const CorrelatorSet& set, double step_degrees) {
  const double step = step_degrees * kPi / 180.0;
  // alpha -> alpha + pi (and beta likewise) only flips the sign inside one
  // absolute value, so site-one angles need only [0, pi).
  const auto n_half = static_cast<std::size_t>(std::round(kPi / step));
  const std::size_t n_full = 2 * n_half;
  std::vector<double> site_two(n_full);
  for (std::size_t i = 0; i < n_full; ++i) site_two[i] = -kPi + step * static_cast<double>(i);
  std::vector<double> table(n_half * n_full);
  for (std::size_t a = 0; a < n_half; ++a) {
    for (std::size_t g = 0; g < n_full; ++g) {
      table[a * n_full + g] = bilinear(step * static_cast<double>(a), site_two[g], set);
    }
  }

  double best = -1.0;
  std::array<std::size_t, 4> arg{};
  for (std::size_t a = 0; a < n_half; ++a) {
    const double* ra = &table[a * n_full];
    for (std::size_t b = 0; b < n_half; ++b) {
      const double* rb = &table[b * n_full];
      for (std::size_t g = 0; g < n_full; ++g) {
        const double ag = ra[g];
        const double bg = rb[g];
        for (std::size_t d = 0; d < n_full; ++d) {
          const double v = std::abs(ag + ra[d]) + std::abs(bg - rb[d]);
          if (v > best) {
            best = v;
            arg = {a, b, g, d};
          }
        }
      }
    }
  }

  std::array<double, 4> x{step * static_cast<double>(arg[0]), step * static_cast<double>(arg[1]),
                          site_two[arg[2]], site_two[arg[3]]};
  double local_step = step;
  for (int round = 0; round < 3; ++round) {
    const double fine = local_step / 10.0;
    std::array<double, 4> centre = x;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        for (int k = -10; k <= 10; ++k) {
          for (int m = -10; m <= 10; ++m) {
            const std::array<double, 4> p{centre[0] + i * fine, centre[1] + j * fine,
                                          centre[2] + k * fine, centre[3] + m * fine};
            const double v = chsh_direct(p, set);
            if (v > best) {
              best = v;
              x = p;
            }
          }
        }
      }
    }
    local_step = fine;
  }
  return {ChshSettings{x[0], x[1], x[2], x[3]}, best};
}

GridOracleResult grid_correlators(double l, double r, int k_min, std::size_t n_cells) {
  const Grid grid = Grid::centered(n_cells, k_min);
  const double cells = l / grid.cell_width();
  if (cells < 1.0 || cells != std::floor(cells)) {
    throw Error(ErrorKind::MisalignedGrid, "box length is not a whole number of cells");
  }
  const auto cpb = static_cast<std::size_t>(cells);
  const SqueezeState state(r);
  const GridOperator z = build_spin_operator(SpinAxis::Z, cpb, grid);
  const GridOperator x = build_spin_operator(SpinAxis::X, cpb, grid);
  const GridOperator y = build_spin_operator(SpinAxis::Y, cpb, grid);
  const auto zz = expectation(z, z, state);
  const auto xx = expectation(x, x, state);
  const auto yy = expectation(y, y, state);
  GridOracleResult out;
  out.czz = zz.real();
  out.cxx = xx.real();
  out.cyy = yy.real();
  out.imag_max = std::max({std::abs(zz.imag()), std::abs(xx.imag()), std::abs(yy.imag())});
  return out;
}

}  // namespace boxspin::verify
