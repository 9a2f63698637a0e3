#pragma once

// Independent reference computations used to check the main code paths.
// None of these call into the quadrature lattice or the optimizer.

#include <cstdint>

#include "boxspin/bell.hpp"
#include "boxspin/correlators.hpp"

namespace boxspin::verify {

/// P(X > 0, Y > 0) for a standard bivariate normal with correlation rho:
/// 1/4 + asin(rho) / (2 pi).
double orthant_probability(double rho) noexcept;

/// Large-l ZZ limit rederived from the orthant formula: two same-sign
/// quadrants minus two opposite-sign ones = (2/pi) asin(tanh 2r).
double czz_limit_from_orthants(double r) noexcept;

/// Maximum CHSH value over x-z plane settings for a bilinear correlator
/// with 2x2 tensor [[czz, czx], [cxz, cxx]]: 2 sqrt(s1^2 + s2^2) from its
/// singular values.
double chsh_max_from_tensor(const CorrelatorSet& set) noexcept;

struct GridSearchResult {
  ChshSettings settings;
  double value = 0.0;
};

/// Dense 4D grid search of the CHSH value at `step_degrees` resolution, then
/// three rounds of local refinement at 1/10 of the previous step.
GridSearchResult grid_search_chsh(const CorrelatorSet& set, double step_degrees = 2.0);

/// ZZ correlator from the discrete operator grid (midpoint rule), grid of
/// 2^-k_min cells per unit length centered on zero.
struct GridOracleResult {
  double czz = 0.0;
  double cxx = 0.0;
  double cyy = 0.0;
  double imag_max = 0.0;
};
GridOracleResult grid_correlators(double l, double r, int k_min, std::size_t n_cells);

}  // namespace boxspin::verify
