#pragma once

// Two-mode squeezed (NOPA) state in the position representation
//
//   psi(q, q') = pi^{-1/2} exp(q q' sinh 2r - (q^2 + q'^2) cosh 2r / 2)
//
// psi^2 is a centered bivariate normal with covariance
// (1/2) [[cosh 2r, sinh 2r], [sinh 2r, cosh 2r]], i.e. marginal variance
// cosh(2r)/2 and correlation tanh(2r). Positions are dimensionless.

#include <array>

namespace boxspin {

using Vec2 = std::array<double, 2>;

/// Largest supported squeezing; beyond it cosh(2r)·q^2 overflows on the
/// lattice extents we integrate over.
inline constexpr double kMaxSqueezing = 5.0;

class SqueezeState {
 public:
  /// Throws Error(InvalidState) unless 0 <= r <= kMaxSqueezing.
  explicit SqueezeState(double r);

  double r() const noexcept { return r_; }
  double cosh2r() const noexcept { return cosh2r_; }
  double sinh2r() const noexcept { return sinh2r_; }
  /// Correlation coefficient tanh(2r).
  double rho() const noexcept { return rho_; }
  /// Marginal variance cosh(2r)/2.
  double sigma2() const noexcept { return 0.5 * cosh2r_; }
  double sigma() const noexcept;
  /// Standard deviation along the anti-diagonal, e^{-r}/sqrt(2); the
  /// narrowest direction of psi^2.
  double sigma_min() const noexcept;

  friend bool operator==(const SqueezeState&, const SqueezeState&) = default;

 private:
  double r_;
  double cosh2r_;
  double sinh2r_;
  double rho_;
};

double wavefunction(double q, double q2, const SqueezeState& state) noexcept;
double joint_density(double q, double q2, const SqueezeState& state) noexcept;

/// Large-l limit of <s_z s'_z>: (2/pi) atan(sinh 2r).
double czz_asymptote(const SqueezeState& state) noexcept;

/// Unnormalized 2D Gaussian  weight * exp(-(x-mu)^T P (x-mu) / 2).
///
/// psi^2 and every shifted product psi(x) psi(x+s) needed for the
/// pseudo-spin correlators have this form with the same precision
/// P = 2 [[c, -s], [-s, c]]; knowing the total mass and covariance lets the
/// lattice summation bound what it drops.
struct GaussianIntegrand {
  Vec2 center{0.0, 0.0};
  /// Precision matrix entries (symmetric).
  double p11 = 1.0;
  double p12 = 0.0;
  double p22 = 1.0;
  double weight = 1.0;

  double operator()(double x, double y) const noexcept;
  /// Mahalanobis distance squared from the center.
  double mahalanobis2(double x, double y) const noexcept;
  /// Integral over the whole plane.
  double total_mass() const noexcept;
  /// Smallest Mahalanobis distance squared over [a,b]x[c,d].
  double min_mahalanobis2(double a, double b, double c, double d) const noexcept;
};

/// psi^2 as a GaussianIntegrand.
GaussianIntegrand density_integrand(const SqueezeState& state) noexcept;

/// psi(q, q') * psi(q + shift[0], q' + shift[1]) as a GaussianIntegrand.
GaussianIntegrand shifted_product_integrand(const SqueezeState& state, Vec2 shift) noexcept;

}  // namespace boxspin
