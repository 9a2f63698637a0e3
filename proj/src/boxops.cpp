#include "boxspin/boxops.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "boxspin/errors.hpp"

namespace boxspin {

std::string to_string(GaussInt z) {
  if (z.im == 0) return std::to_string(z.re);
  if (z.re == 0) return std::to_string(z.im) + "i";
  return std::to_string(z.re) + (z.im < 0 ? "" : "+") + std::to_string(z.im) + "i";
}

// ---------------------------------------------------------------- ExactMatrix

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.rows_[i].push_back({i, {1, 0}});
  return m;
}

GaussInt ExactMatrix::at(std::size_t row, std::size_t col) const {
  const auto& r = rows_.at(row);
  auto it = std::lower_bound(r.begin(), r.end(), col,
                             [](const Entry& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == col) return it->second;
  return {};
}

void ExactMatrix::set(std::size_t row, std::size_t col, GaussInt value) {
  if (col >= rows_.size()) throw Error(ErrorKind::GridMismatch, "column out of range");
  auto& r = rows_.at(row);
  auto it = std::lower_bound(r.begin(), r.end(), col,
                             [](const Entry& e, std::size_t c) { return e.first < c; });
  const bool present = it != r.end() && it->first == col;
  if (value.is_zero()) {
    if (present) r.erase(it);
  } else if (present) {
    it->second = value;
  } else {
    r.insert(it, {col, value});
  }
}

bool ExactMatrix::is_zero() const noexcept {
  return std::all_of(rows_.begin(), rows_.end(), [](const auto& r) { return r.empty(); });
}

bool ExactMatrix::is_diagonal() const noexcept {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& [col, v] : rows_[i]) {
      if (col != i) return false;
    }
  }
  return true;
}

bool ExactMatrix::is_signed_partial_permutation() const {
  std::vector<bool> column_used(rows_.size(), false);
  for (const auto& r : rows_) {
    if (r.size() > 1) return false;
    for (const auto& [col, v] : r) {
      if (column_used[col]) return false;
      column_used[col] = true;
      if (std::abs(v.re) + std::abs(v.im) != 1) return false;
    }
  }
  return true;
}

std::size_t ExactMatrix::nonzeros() const noexcept {
  std::size_t count = 0;
  for (const auto& r : rows_) count += r.size();
  return count;
}

ExactMatrix ExactMatrix::adjoint() const {
  ExactMatrix out(size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& [col, v] : rows_[i]) out.rows_[col].push_back({i, v.conj()});
  }
  // Rows were filled in increasing i, so each stays sorted.
  return out;
}

namespace {

void check_same_size(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::GridMismatch, "matrix sizes differ: " + std::to_string(a.size()) +
                                             " vs " + std::to_string(b.size()));
  }
}

std::vector<ExactMatrix::Entry> merge_rows(const std::vector<ExactMatrix::Entry>& a,
                                           const std::vector<ExactMatrix::Entry>& b,
                                           bool subtract) {
  std::vector<ExactMatrix::Entry> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back({b[j].first, subtract ? -b[j].second : b[j].second});
      ++j;
    } else {
      const GaussInt v = subtract ? a[i].second - b[j].second : a[i].second + b[j].second;
      if (!v.is_zero()) out.push_back({a[i].first, v});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

ExactMatrix& ExactMatrix::operator+=(const ExactMatrix& other) {
  check_same_size(*this, other);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    rows_[r] = merge_rows(rows_[r], other.rows_[r], false);
  }
  return *this;
}

ExactMatrix& ExactMatrix::operator-=(const ExactMatrix& other) {
  check_same_size(*this, other);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    rows_[r] = merge_rows(rows_[r], other.rows_[r], true);
  }
  return *this;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  check_same_size(a, b);
  ExactMatrix out(a.size());
  std::map<std::size_t, GaussInt> acc;
  for (std::size_t r = 0; r < a.size(); ++r) {
    acc.clear();
    for (const auto& [k, av] : a.rows_[r]) {
      for (const auto& [c, bv] : b.rows_[k]) acc[c] = acc[c] + av * bv;
    }
    for (const auto& [c, v] : acc) {
      if (!v.is_zero()) out.rows_[r].push_back({c, v});
    }
  }
  return out;
}

ExactMatrix operator*(GaussInt scalar, const ExactMatrix& m) {
  ExactMatrix out(m.size());
  if (scalar.is_zero()) return out;
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (const auto& [c, v] : m.rows_[r]) out.rows_[r].push_back({c, scalar * v});
  }
  return out;
}

// ----------------------------------------------------------------------- Grid

Grid::Grid(std::size_t n_cells, int k_min, std::int64_t origin_cells)
    : n_cells_(n_cells), k_min_(k_min), origin_cells_(origin_cells) {
  if (n_cells == 0 || !std::has_single_bit(n_cells)) {
    throw Error(ErrorKind::MisalignedGrid,
                "n_cells must be a power of two, got " + std::to_string(n_cells));
  }
}

Grid Grid::centered(std::size_t n_cells, int k_min) {
  return Grid(n_cells, k_min, -static_cast<std::int64_t>(n_cells / 2));
}

double Grid::cell_width() const noexcept { return std::ldexp(1.0, k_min_); }

double Grid::origin() const noexcept {
  return static_cast<double>(origin_cells_) * cell_width();
}

double Grid::cell_left(std::size_t i) const noexcept {
  return static_cast<double>(origin_cells_ + static_cast<std::int64_t>(i)) * cell_width();
}

double Grid::cell_mid(std::size_t i) const noexcept { return cell_left(i) + 0.5 * cell_width(); }

std::int64_t Grid::box_of(std::size_t cell, std::size_t cells_per_box) const noexcept {
  const std::int64_t global = origin_cells_ + static_cast<std::int64_t>(cell);
  const auto cpb = static_cast<std::int64_t>(cells_per_box);
  // Floor division for negative cells.
  return global >= 0 ? global / cpb : -((-global + cpb - 1) / cpb);
}

bool Grid::supports(std::size_t cells_per_box) const noexcept {
  if (cells_per_box == 0) return false;
  const std::size_t block = 2 * cells_per_box;
  const auto block_signed = static_cast<std::int64_t>(block);
  return n_cells_ % block == 0 && origin_cells_ % block_signed == 0;
}

// ------------------------------------------------------------------ operators

namespace {

void require_support(const Grid& grid, std::size_t cells_per_box) {
  if (!grid.supports(cells_per_box)) {
    throw Error(ErrorKind::MisalignedGrid,
                "blocks of 2x" + std::to_string(cells_per_box) + " cells do not tile a grid of " +
                    std::to_string(grid.n_cells()) + " cells at origin cell " +
                    std::to_string(grid.origin_cells()));
  }
}

bool even_box(const Grid& grid, std::size_t cell, std::size_t cpb) {
  return (grid.box_of(cell, cpb) & 1) == 0;
}

}  // namespace

GridOperator build_spin_operator(SpinAxis axis, std::size_t cpb, const Grid& grid) {
  require_support(grid, cpb);
  const std::size_t n = grid.n_cells();
  GridOperator op{grid, cpb, OperatorKind::Z, 0, ExactMatrix(n)};
  const GaussInt one{1, 0};
  const GaussInt i_unit = GaussInt::i();
  for (std::size_t c = 0; c < n; ++c) {
    const bool lower = even_box(grid, c, cpb);
    switch (axis) {
      case SpinAxis::Z:
        op.kind = OperatorKind::Z;
        op.matrix.set(c, c, lower ? one : -one);
        break;
      case SpinAxis::Plus:
        // Lower box takes the contents of the upper box of its block.
        op.kind = OperatorKind::Plus;
        if (lower) op.matrix.set(c, c + cpb, one);
        break;
      case SpinAxis::Minus:
        op.kind = OperatorKind::Minus;
        if (!lower) op.matrix.set(c, c - cpb, one);
        break;
      case SpinAxis::X:
        op.kind = OperatorKind::X;
        op.matrix.set(c, lower ? c + cpb : c - cpb, one);
        break;
      case SpinAxis::Y:
        // -i (s_+ - s_-)
        op.kind = OperatorKind::Y;
        if (lower) {
          op.matrix.set(c, c + cpb, -i_unit);
        } else {
          op.matrix.set(c, c - cpb, i_unit);
        }
        break;
    }
  }
  return op;
}

GridOperator box_projector(std::int64_t box, std::size_t cpb, const Grid& grid) {
  if (cpb == 0) throw Error(ErrorKind::MisalignedGrid, "cells_per_box must be positive");
  GridOperator op{grid, cpb, OperatorKind::Projector, box, ExactMatrix(grid.n_cells())};
  for (std::size_t c = 0; c < grid.n_cells(); ++c) {
    if (grid.box_of(c, cpb) == box) op.matrix.set(c, c, {1, 0});
  }
  return op;
}

GridOperator box_translation(std::int64_t box, std::size_t cpb, const Grid& grid) {
  if (cpb == 0) throw Error(ErrorKind::MisalignedGrid, "cells_per_box must be positive");
  GridOperator op{grid, cpb, OperatorKind::Translation, box, ExactMatrix(grid.n_cells())};
  for (std::size_t c = 0; c < grid.n_cells(); ++c) {
    if (grid.box_of(c, cpb) == box && c + cpb < grid.n_cells()) {
      op.matrix.set(c, c + cpb, {1, 0});
    }
  }
  return op;
}

GridOperator box_translation_adjoint(std::int64_t box, std::size_t cpb, const Grid& grid) {
  if (cpb == 0) throw Error(ErrorKind::MisalignedGrid, "cells_per_box must be positive");
  GridOperator op{grid, cpb, OperatorKind::TranslationAdjoint, box,
                  ExactMatrix(grid.n_cells())};
  for (std::size_t c = 0; c < grid.n_cells(); ++c) {
    if (grid.box_of(c, cpb) == box + 1 && c >= cpb) op.matrix.set(c, c - cpb, {1, 0});
  }
  return op;
}

ExactMatrix commutator(const GridOperator& a, const GridOperator& b) {
  if (!(a.grid == b.grid)) throw Error(ErrorKind::GridMismatch, "operators live on different grids");
  return a.matrix * b.matrix - b.matrix * a.matrix;
}

HierarchyReport hierarchy_commutes(std::size_t scale_a, std::size_t scale_b, const Grid& grid) {
  constexpr SpinAxis axes[3] = {SpinAxis::X, SpinAxis::Y, SpinAxis::Z};
  HierarchyReport report;
  report.all_commute = true;
  for (int i = 0; i < 3; ++i) {
    const GridOperator a = build_spin_operator(axes[i], scale_a, grid);
    for (int j = 0; j < 3; ++j) {
      const GridOperator b = build_spin_operator(axes[j], scale_b, grid);
      report.commutes[i][j] = commutator(a, b).is_zero();
      report.all_commute = report.all_commute && report.commutes[i][j];
    }
  }
  return report;
}

std::complex<double> DyadicMatrix::value(std::size_t i, std::size_t j) const {
  return std::ldexp(1.0, exponent) * matrix.at(i, j).to_complex();
}

DyadicMatrix position_from_bits(TruncationWindow window, const Grid& grid, SpinAxis axis) {
  window.validate();
  if (grid.origin_cells() != 0) {
    throw Error(ErrorKind::MisalignedGrid, "position_from_bits needs a grid starting at 0");
  }
  if (axis == SpinAxis::Plus || axis == SpinAxis::Minus) {
    throw Error(ErrorKind::RangeError, "position_from_bits takes Z, X or Y");
  }
  if (window.k_lo < grid.k_min()) {
    throw Error(ErrorKind::MisalignedGrid, "bit 2^" + std::to_string(window.k_lo) +
                                               " is finer than the cell width");
  }
  // 2^k (I - S_k) / 2 = 2^(k_lo - 1) * 2^(k - k_lo) (I - S_k)
  const std::size_t n = grid.n_cells();
  DyadicMatrix out{window.k_lo - 1, ExactMatrix(n)};
  const ExactMatrix identity = ExactMatrix::identity(n);
  for (int k = window.k_lo; k <= window.k_hi; ++k) {
    const int shift = k - grid.k_min();
    if (shift >= 62) throw Error(ErrorKind::MisalignedGrid, "bit scale too large for grid");
    const std::size_t cpb = std::size_t{1} << shift;
    const GridOperator s = build_spin_operator(axis, cpb, grid);
    const GaussInt weight{std::int64_t{1} << (k - window.k_lo), 0};
    out.matrix += weight * (identity - s.matrix);
  }
  return out;
}

std::complex<double> expectation(const GridOperator& a, const GridOperator& b,
                                 const SqueezeState& state) {
  if (!(a.grid == b.grid)) throw Error(ErrorKind::GridMismatch, "operators live on different grids");
  const Grid& grid = a.grid;
  const std::size_t n = grid.n_cells();
  std::vector<double> mids(n);
  for (std::size_t i = 0; i < n; ++i) mids[i] = grid.cell_mid(i);
  std::vector<double> psi(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) psi[i * n + j] = wavefunction(mids[i], mids[j], state);
  }
  // <psi| A (x) B |psi> = sum_ij psi_ij sum_{i'j'} A_ii' B_jj' psi_i'j'  (psi real)
  std::complex<double> total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [ic, av] : a.matrix.row(i)) {
      const std::complex<double> ca = av.to_complex();
      std::complex<double> row_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double left = psi[i * n + j];
        for (const auto& [jc, bv] : b.matrix.row(j)) {
          row_sum += left * bv.to_complex() * psi[ic * n + jc];
        }
      }
      total += ca * row_sum;
    }
  }
  const double w = grid.cell_width();
  return total * w * w;
}

}  // namespace boxspin
