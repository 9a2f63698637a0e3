#include "boxspin/bits.hpp"

#include <cmath>

#include "boxspin/errors.hpp"

namespace boxspin {

void TruncationWindow::validate() const {
  if (k_lo > k_hi) {
    throw Error(ErrorKind::RangeError, "truncation window needs k_lo <= k_hi, got [" +
                                           std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                                           "]");
  }
}

double TruncationWindow::weight_sum() const {
  validate();
  double total = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) total += std::ldexp(1.0, k);
  return total;
}

MeasuredPosition::MeasuredPosition(double q) : q_(q) {
  if (!std::isfinite(q)) throw Error(ErrorKind::RangeError, "position must be finite");
}

int bit_at(MeasuredPosition q, int k) {
  // Scaling by 2^-k is exact for dyadic inputs, so floor and parity are too.
  const double box = std::floor(std::ldexp(q.value(), -k));
  double parity = std::fmod(box, 2.0);
  if (parity < 0.0) parity += 2.0;
  return parity != 0.0 ? 1 : 0;
}

int spin_from_bit(int b) {
  if (b != 0 && b != 1) {
    throw Error(ErrorKind::RangeError, "bit must be 0 or 1, got " + std::to_string(b));
  }
  return 1 - 2 * b;
}

double xor_expectation(double spin_correlation) {
  if (!(std::abs(spin_correlation) <= 1.0 + 1e-9)) {
    throw Error(ErrorKind::RangeError,
                "spin correlation outside [-1, 1]: " + std::to_string(spin_correlation));
  }
  return 0.5 * (1.0 - spin_correlation);
}

double truncated_value(MeasuredPosition q, TruncationWindow window) {
  window.validate();
  double total = 0.0;
  for (int k = window.k_lo; k <= window.k_hi; ++k) {
    if (bit_at(q, k) != 0) total += std::ldexp(1.0, k);
  }
  return total;
}

std::string format_binary(MeasuredPosition q, TruncationWindow window) {
  window.validate();
  std::string out;
  if (q.value() < 0.0) out += "...";
  if (window.k_hi < 0) out += '.';
  for (int k = window.k_hi; k >= window.k_lo; --k) {
    out += bit_at(q, k) != 0 ? '1' : '0';
    if (k == 0 && window.k_lo < 0) out += '.';
  }
  return out;
}

}  // namespace boxspin
