#include <cmath>

#include "boxspin/bits.hpp"
#include "boxspin/boxops.hpp"
#include "boxspin/correlators.hpp"
#include "boxspin/errors.hpp"
#include "doctest.h"

using namespace boxspin;

namespace {

ExactMatrix diagonal(std::initializer_list<std::int64_t> d) {
  ExactMatrix m = ExactMatrix::zero(d.size());
  std::size_t i = 0;
  for (auto v : d) {
    m.set(i, i, GaussInt{v, 0});
    ++i;
  }
  return m;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidState;
}

}  // namespace

TEST_SUITE("boxops") {
  TEST_CASE("Gaussian integer arithmetic") {
    const GaussInt i = GaussInt::i();
    CHECK(i * i == GaussInt{-1, 0});
    CHECK((GaussInt{2, 3} * GaussInt{1, -1}) == GaussInt{5, 1});
    CHECK(GaussInt{2, 3}.conj() == GaussInt{2, -3});
    CHECK(to_string(GaussInt{0, -1}) == "-1i");
    CHECK(to_string(GaussInt{3, -2}) == "3-2i");
    CHECK(to_string(GaussInt{4, 0}) == "4");
  }

  TEST_CASE("grid construction") {
    CHECK(kind_of([] { Grid(12, 0); }) == ErrorKind::MisalignedGrid);
    const Grid g = Grid::centered(16, -2);
    CHECK(g.cell_width() == 0.25);
    CHECK(g.origin() == -2.0);
    CHECK(g.cell_left(0) == -2.0);
    CHECK(g.cell_mid(0) == -1.875);
    CHECK(g.box_of(0, 1) == -8);
    CHECK(g.box_of(7, 4) == -1);
    CHECK(g.box_of(8, 4) == 0);
    CHECK(g.supports(4));
    CHECK(!g.supports(16));
  }

  TEST_CASE("spin operator examples") {
    CHECK(build_spin_operator(SpinAxis::Z, 1, Grid(4, 0)).matrix == diagonal({1, -1, 1, -1}));
    ExactMatrix exchange = ExactMatrix::zero(2);
    exchange.set(0, 1, {1, 0});
    exchange.set(1, 0, {1, 0});
    CHECK(build_spin_operator(SpinAxis::X, 1, Grid(2, 0)).matrix == exchange);
    const auto y = build_spin_operator(SpinAxis::Y, 2, Grid(8, 0));
    CHECK(y.matrix * y.matrix == ExactMatrix::identity(8));
    CHECK(kind_of([] { build_spin_operator(SpinAxis::X, 4, Grid(4, 0)); }) ==
          ErrorKind::MisalignedGrid);
    CHECK(kind_of([] { build_spin_operator(SpinAxis::X, 2, Grid(16, 0, 2)); }) ==
          ErrorKind::MisalignedGrid);
  }

  TEST_CASE("pseudo-spin algebra on every representable scale") {
    const GaussInt two_i{0, 2};
    for (std::size_t n : {2u, 8u, 32u, 256u}) {
      for (const Grid& g : {Grid(n, 0), Grid::centered(n, -1)}) {
        const auto id = ExactMatrix::identity(n);
        for (std::size_t s = 1; 2 * s <= n; s *= 2) {
          if (!g.supports(s)) continue;
          const auto x = build_spin_operator(SpinAxis::X, s, g);
          const auto y = build_spin_operator(SpinAxis::Y, s, g);
          const auto z = build_spin_operator(SpinAxis::Z, s, g);
          const auto p = build_spin_operator(SpinAxis::Plus, s, g);
          const auto m = build_spin_operator(SpinAxis::Minus, s, g);
          CHECK(x.matrix * x.matrix == id);
          CHECK(y.matrix * y.matrix == id);
          CHECK(z.matrix * z.matrix == id);
          CHECK(commutator(x, y) == two_i * z.matrix);
          CHECK(commutator(y, z) == two_i * x.matrix);
          CHECK(commutator(z, x) == two_i * y.matrix);
          CHECK(p.matrix == m.matrix.adjoint());
          CHECK(x.matrix == p.matrix + m.matrix);
          CHECK(y.matrix == GaussInt{0, -1} * (p.matrix - m.matrix));
          for (const auto* op : {&x, &y, &z, &p, &m}) CHECK(op->matrix.is_signed_partial_permutation());
          CHECK(x.matrix.adjoint() == x.matrix);
          CHECK(y.matrix.adjoint() == y.matrix);
        }
      }
    }
  }

  TEST_CASE("spin operators from projectors and translations") {
    const Grid g(16, 0);
    const std::size_t s = 2;
    ExactMatrix z = ExactMatrix::zero(16);
    ExactMatrix plus = ExactMatrix::zero(16);
    ExactMatrix minus = ExactMatrix::zero(16);
    for (std::int64_t n = 0; n < 8; ++n) {
      const auto k = box_projector(n, s, g).matrix;
      z = (n % 2 == 0) ? z + k : z - k;
      CHECK(k * k == k);
    }
    for (std::int64_t n = 0; n < 8; n += 2) {
      plus = plus + box_translation(n, s, g).matrix;
      minus = minus + box_translation_adjoint(n, s, g).matrix;
    }
    CHECK(z == build_spin_operator(SpinAxis::Z, s, g).matrix);
    CHECK(plus == build_spin_operator(SpinAxis::Plus, s, g).matrix);
    CHECK(minus == build_spin_operator(SpinAxis::Minus, s, g).matrix);
  }

  TEST_CASE("commutator examples") {
    const Grid g(16, 0);
    const auto z1 = build_spin_operator(SpinAxis::Z, 1, g);
    const auto z2 = build_spin_operator(SpinAxis::Z, 2, g);
    const auto x1 = build_spin_operator(SpinAxis::X, 1, g);
    CHECK(commutator(z1, z2).is_zero());
    CHECK(!commutator(z1, x1).is_zero());
    const auto other = build_spin_operator(SpinAxis::Z, 1, Grid(8, 0));
    CHECK(kind_of([&] { commutator(z1, other); }) == ErrorKind::GridMismatch);
  }

  TEST_CASE("commuting hierarchy") {
    for (std::size_t n : {16u, 64u, 256u}) {
      const Grid g(n, 0);
      for (std::size_t s = 1; 2 * s <= n; s *= 2) {
        CHECK(!hierarchy_commutes(s, s, g).all_commute);
        for (std::size_t t = 2 * s; 2 * t <= n; t *= 2) {
          CHECK(hierarchy_commutes(s, t, g).all_commute);
          CHECK(hierarchy_commutes(t, s, g).all_commute);
        }
      }
    }
    const auto same = hierarchy_commutes(1, 1, Grid(8, 0));
    CHECK(!same.commutes[0][1]);
    CHECK(same.commutes[2][2]);
    CHECK(kind_of([] { hierarchy_commutes(1, 8, Grid(8, 0)); }) == ErrorKind::MisalignedGrid);
  }

  TEST_CASE("position operator from bits") {
    auto diag_values = [](const DyadicMatrix& m) {
      std::vector<double> out;
      for (std::size_t i = 0; i < m.matrix.size(); ++i) out.push_back(m.value(i, i).real());
      return out;
    };
    CHECK(diag_values(position_from_bits({1, 0}, Grid(4, 0))) == std::vector<double>{0, 1, 2, 3});
    CHECK(diag_values(position_from_bits({0, 0}, Grid(2, 0))) == std::vector<double>{0, 1});
    CHECK(position_from_bits({1, 0}, Grid(4, 0)).matrix.is_diagonal());

    const Grid g(32, -2);
    const TruncationWindow w{2, -2};
    const auto pos = position_from_bits(w, g);
    const auto d = diag_values(pos);
    for (std::size_t c = 0; c < 32; ++c) {
      CHECK(d[c] == truncated_value(MeasuredPosition(g.cell_left(c)), w));
      CHECK(d[c] >= 0.0);
      if (c > 0) CHECK(d[c] > d[c - 1]);
    }
    CHECK(kind_of([] { position_from_bits({1, 0}, Grid::centered(8, 0)); }) ==
          ErrorKind::MisalignedGrid);
    CHECK(kind_of([] { position_from_bits({1, -1}, Grid(8, 0)); }) == ErrorKind::MisalignedGrid);
  }

  TEST_CASE("rotated pseudo-positions") {
    const Grid g(16, 0);
    const TruncationWindow w{2, 0};
    const auto qx = position_from_bits(w, g, SpinAxis::X);
    const auto qy = position_from_bits(w, g, SpinAxis::Y);
    CHECK(!qx.matrix.is_diagonal());
    CHECK(qx.matrix.adjoint() == qx.matrix);
    CHECK(qy.matrix.adjoint() == qy.matrix);
  }

  TEST_CASE("grid expectations") {
    const Grid g = Grid::centered(1024, -5);
    const auto z = build_spin_operator(SpinAxis::Z, 32, g);
    CHECK(std::abs(expectation(z, z, SqueezeState(0.0)).real()) < 1e-4);
    const auto zz = expectation(z, z, SqueezeState(1.0));
    CHECK(std::abs(zz.real() - correlator(SpinPair::ZZ, 1.0, 1.0).value) < 1e-3);
    const auto x = build_spin_operator(SpinAxis::X, 32, g);
    const auto y = build_spin_operator(SpinAxis::Y, 32, g);
    CHECK(std::abs(expectation(x, y, SqueezeState(1.0)).imag()) < 1e-10);
    const auto small = build_spin_operator(SpinAxis::Z, 1, Grid(8, 0));
    CHECK(kind_of([&] { expectation(z, small, SqueezeState(1.0)); }) == ErrorKind::GridMismatch);
  }
}
