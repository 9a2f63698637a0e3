#pragma once

// Exact finite-grid representation of box projectors, box translations and
// the pseudo-spin operators built from them.
//
// The line is cut into n_cells cells of width 2^k_min starting at `origin`.
// A box of length l spans cells_per_box = l / cell_width cells; box n covers
// [n l, n l + l). Operators are block-local (a block is two adjacent boxes
// starting at an even box), so a grid whose ends fall on block boundaries
// represents them without wraparound.
//
// Matrix entries are Gaussian integers; all products and commutators are
// exact, so the spin algebra identities are decided, not approximated.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "boxspin/bits.hpp"
#include "boxspin/gaussian_state.hpp"

namespace boxspin {

struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  static constexpr GaussInt i() noexcept { return {0, 1}; }
  bool is_zero() const noexcept { return re == 0 && im == 0; }
  GaussInt conj() const noexcept { return {re, -im}; }
  std::complex<double> to_complex() const noexcept {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  friend constexpr GaussInt operator+(GaussInt a, GaussInt b) noexcept {
    return {a.re + b.re, a.im + b.im};
  }
  friend constexpr GaussInt operator-(GaussInt a, GaussInt b) noexcept {
    return {a.re - b.re, a.im - b.im};
  }
  friend constexpr GaussInt operator-(GaussInt a) noexcept { return {-a.re, -a.im}; }
  friend constexpr GaussInt operator*(GaussInt a, GaussInt b) noexcept {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend constexpr bool operator==(GaussInt, GaussInt) = default;
};

std::string to_string(GaussInt z);

/// Sparse square matrix over the Gaussian integers. Rows keep their nonzero
/// entries sorted by column; explicit zeros are never stored.
class ExactMatrix {
 public:
  using Entry = std::pair<std::size_t, GaussInt>;

  ExactMatrix() = default;
  explicit ExactMatrix(std::size_t n) : rows_(n) {}
  static ExactMatrix identity(std::size_t n);
  static ExactMatrix zero(std::size_t n) { return ExactMatrix(n); }

  std::size_t size() const noexcept { return rows_.size(); }
  GaussInt at(std::size_t row, std::size_t col) const;
  /// Overwrites entry (row, col); setting zero removes it.
  void set(std::size_t row, std::size_t col, GaussInt value);
  const std::vector<Entry>& row(std::size_t r) const { return rows_.at(r); }

  bool is_zero() const noexcept;
  bool is_diagonal() const noexcept;
  /// At most one nonzero per row and per column, each a unit (+-1, +-i).
  bool is_signed_partial_permutation() const;
  std::size_t nonzeros() const noexcept;
  ExactMatrix adjoint() const;

  ExactMatrix& operator+=(const ExactMatrix& other);
  ExactMatrix& operator-=(const ExactMatrix& other);
  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator*(GaussInt scalar, const ExactMatrix& m);
  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

 private:
  std::vector<std::vector<Entry>> rows_;
};

/// Cell grid. Cell width is 2^k_min; the origin is stored in cells.
class Grid {
 public:
  /// Throws Error(MisalignedGrid) unless n_cells is a power of two.
  Grid(std::size_t n_cells, int k_min, std::int64_t origin_cells = 0);
  /// Grid symmetric about zero: origin = -n_cells * cell_width / 2.
  static Grid centered(std::size_t n_cells, int k_min);

  std::size_t n_cells() const noexcept { return n_cells_; }
  int k_min() const noexcept { return k_min_; }
  double cell_width() const noexcept;
  std::int64_t origin_cells() const noexcept { return origin_cells_; }
  double origin() const noexcept;
  /// Left edge of cell i.
  double cell_left(std::size_t i) const noexcept;
  double cell_mid(std::size_t i) const noexcept;
  /// Box index floor(cell_left / l) for boxes of cells_per_box cells.
  std::int64_t box_of(std::size_t cell, std::size_t cells_per_box) const noexcept;
  /// True if blocks of 2*cells_per_box cells tile the grid from the origin.
  bool supports(std::size_t cells_per_box) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_cells_;
  int k_min_;
  std::int64_t origin_cells_;
};

enum class OperatorKind { Z, X, Y, Plus, Minus, Projector, Translation, TranslationAdjoint };

struct GridOperator {
  Grid grid;
  std::size_t cells_per_box;
  OperatorKind kind;
  /// Box index n for Projector/Translation kinds, 0 otherwise.
  std::int64_t box = 0;
  ExactMatrix matrix;
};

enum class SpinAxis { Z, X, Y, Plus, Minus };

/// s_z, s_x, s_y, s_+ or s_- at box length cells_per_box * cell_width.
/// Throws Error(MisalignedGrid) if blocks do not tile the grid.
GridOperator build_spin_operator(SpinAxis axis, std::size_t cells_per_box, const Grid& grid);

/// Projector k_n onto box n (cells outside the grid are simply absent).
GridOperator box_projector(std::int64_t n, std::size_t cells_per_box, const Grid& grid);

/// t_n: (t_n psi)(q) = psi(q + l) on box n; rows whose source lies off the
/// grid are empty.
GridOperator box_translation(std::int64_t n, std::size_t cells_per_box, const Grid& grid);

/// t_n^dagger: (t_n^dagger psi)(q) = psi(q - l) on box n + 1.
GridOperator box_translation_adjoint(std::int64_t n, std::size_t cells_per_box,
                                     const Grid& grid);

/// AB - BA. Throws Error(GridMismatch) if the operators live on different grids.
ExactMatrix commutator(const GridOperator& a, const GridOperator& b);

struct HierarchyReport {
  /// commutes[a][b] for a, b in (X, Y, Z) order.
  bool commutes[3][3] = {};
  bool all_commute = false;
};

/// Checks all nine [s_a at scale_a, s_b at scale_b] commutators exactly.
HierarchyReport hierarchy_commutes(std::size_t scale_a, std::size_t scale_b, const Grid& grid);

/// Exact matrix scaled by a power of two: value = 2^exponent * matrix.
struct DyadicMatrix {
  int exponent = 0;
  ExactMatrix matrix;

  /// Entry (i, j) as a complex double.
  std::complex<double> value(std::size_t i, std::size_t j) const;
};

/// sum_k 2^k (I - s_{axis, 2^k}) / 2 over the window. For SpinAxis::Z this is
/// the truncated position operator (diagonal); X and Y give the rotated
/// pseudo-positions. Requires origin 0 and every scale 2^k (k in window)
/// to be representable; throws Error(MisalignedGrid) otherwise.
DyadicMatrix position_from_bits(TruncationWindow window, const Grid& grid,
                                SpinAxis axis = SpinAxis::Z);

/// <psi| A (x) B |psi> with psi sampled at cell midpoints (midpoint rule).
/// Throws Error(GridMismatch) if a and b use different grids.
std::complex<double> expectation(const GridOperator& a, const GridOperator& b,
                                 const SqueezeState& state);

}  // namespace boxspin
