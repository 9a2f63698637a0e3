#include <cmath>
#include <limits>

#include "boxspin/bits.hpp"
#include "boxspin/errors.hpp"
#include "doctest.h"

using namespace boxspin;
using doctest::Approx;

TEST_SUITE("bits") {
  TEST_CASE("digits of 101.0100110") {
    const MeasuredPosition q(5.296875);
    CHECK(bit_at(q, 0) == 1);
    CHECK(spin_from_bit(bit_at(q, 0)) == -1);
    const int expected[] = {1, 0, 1, 0, 1, 0, 0, 1, 1, 0};
    for (int k = 2, i = 0; k >= -7; --k, ++i) CHECK(bit_at(q, k) == expected[i]);
  }

  TEST_CASE("negative positions use the floor convention") {
    const MeasuredPosition q(-0.25);
    CHECK(bit_at(q, -2) == 1);
    CHECK(spin_from_bit(bit_at(q, -2)) == -1);
    for (double v : {-3.7, -1.0, -0.5, -0.01, 0.3, 2.6}) {
      for (int k = -3; k <= 2; ++k) {
        const double box = std::floor(v / std::ldexp(1.0, k));
        const int parity = std::fmod(std::abs(box), 2.0) == 0.0 ? 1 : -1;
        CHECK(spin_from_bit(bit_at(MeasuredPosition(v), k)) == parity);
      }
    }
  }

  TEST_CASE("bit extraction is shift covariant on dyadics") {
    for (double v : {5.296875, 0.375, 12.5, -2.625}) {
      for (int k = -5; k <= 3; ++k) {
        CHECK(bit_at(MeasuredPosition(v), k) == bit_at(MeasuredPosition(std::ldexp(v, -k)), 0));
      }
    }
  }

  TEST_CASE("spin and xor algebra") {
    CHECK(spin_from_bit(0) == 1);
    CHECK(spin_from_bit(1) == -1);
    CHECK_THROWS_AS(spin_from_bit(2), Error);
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) CHECK(spin_from_bit(b ^ c) == spin_from_bit(b) * spin_from_bit(c));
    }
    CHECK(xor_expectation(1.0) == 0.0);
    CHECK(xor_expectation(-1.0) == 1.0);
    CHECK(xor_expectation(0.9767) == Approx(0.01165).epsilon(1e-9));
    CHECK_NOTHROW(xor_expectation(1.0 + 5e-10));
    try {
      xor_expectation(1.01);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RangeError);
    }
  }

  TEST_CASE("truncated values") {
    CHECK(truncated_value(MeasuredPosition(5.296875), TruncationWindow{1, -3}) == 1.25);
    CHECK(truncated_value(MeasuredPosition(0.0), TruncationWindow{4, -6}) == 0.0);
    CHECK(truncated_value(MeasuredPosition(3.875), TruncationWindow{}) == 3.875);
    CHECK(TruncationWindow{}.weight_sum() == 3.875);
    CHECK(TruncationWindow{}.size() == 5);
  }

  TEST_CASE("exact reconstruction on dyadic grids") {
    for (const TruncationWindow w : {TruncationWindow{1, -3}, TruncationWindow{4, 0},
                                     TruncationWindow{-1, -8}}) {
      const std::int64_t count = std::int64_t{1} << w.size();
      for (std::int64_t j = 0; j < count; ++j) {
        const double q = std::ldexp(static_cast<double>(j), w.k_lo);
        CHECK(truncated_value(MeasuredPosition(q), w) == q);
      }
    }
  }

  TEST_CASE("binary rendering") {
    CHECK(format_binary(MeasuredPosition(5.296875), TruncationWindow{2, -7}) == "101.0100110");
    CHECK(format_binary(MeasuredPosition(0.5), TruncationWindow{0, -2}) == "0.10");
    CHECK(format_binary(MeasuredPosition(2.0), TruncationWindow{1, -1}) == "10.0");
    CHECK(format_binary(MeasuredPosition(6.0), TruncationWindow{2, 0}) == "110");
    CHECK(format_binary(MeasuredPosition(0.375), TruncationWindow{-1, -3}) == ".011");
    CHECK(format_binary(MeasuredPosition(-0.25), TruncationWindow{1, -2}).rfind("...", 0) == 0);
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(MeasuredPosition(std::numeric_limits<double>::infinity()), Error);
    CHECK_THROWS_AS(MeasuredPosition(std::nan("")), Error);
    CHECK_THROWS_AS((TruncationWindow{-3, 1}.validate()), Error);
    CHECK_THROWS_AS(truncated_value(MeasuredPosition(1.0), TruncationWindow{-3, 1}), Error);
  }
}
