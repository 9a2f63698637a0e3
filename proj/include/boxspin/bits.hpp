#pragma once

// Binary expansion of position results.
//
// Bit k of a position Q is B_k = floor(Q / 2^k) mod 2, and the pseudo-spin
// result at box length 2^k is S = 1 - 2 B_k = (-1)^floor(Q / 2^k). Negative
// positions use the same floor convention (an infinite two's-complement style
// expansion), which keeps the bit consistent with box parity on the whole
// line.
//
// The bitwise operation in the bit-level Bell inequality is XOR: the product
// of two spin results is 1 - 2 (B xor B').

#include <string>

namespace boxspin {

/// Inclusive range of bit positions [k_lo, k_hi].
struct TruncationWindow {
  int k_hi = 1;
  int k_lo = -3;

  /// Throws Error(RangeError) if k_lo > k_hi.
  void validate() const;
  int size() const noexcept { return k_hi - k_lo + 1; }
  /// Sum of 2^k over the window (3.875 for the default window).
  double weight_sum() const;
};

/// A finite position result.
class MeasuredPosition {
 public:
  /// Throws Error(RangeError) for non-finite q.
  explicit MeasuredPosition(double q);
  double value() const noexcept { return q_; }

 private:
  double q_;
};

int bit_at(MeasuredPosition q, int k);

/// 1 - 2b. Throws Error(RangeError) unless b is 0 or 1.
int spin_from_bit(int b);

/// Expectation of B xor B' from the spin correlation: (1 - E)/2.
/// Throws Error(RangeError) if |E| > 1 + 1e-9.
double xor_expectation(double spin_correlation);

/// Sum over the window of 2^k bit_at(q, k).
double truncated_value(MeasuredPosition q, TruncationWindow window);

/// Digits of bit_at from k_hi down to k_lo, with a radix point between k = 0
/// and k = -1 when the window straddles it. Windows entirely below zero start
/// with "."; negative q is prefixed with "..." for the implied leading ones.
std::string format_binary(MeasuredPosition q, TruncationWindow window);

}  // namespace boxspin
