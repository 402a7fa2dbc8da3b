#pragma once

// Bessel functions of order 0 and 1 and the first Dirichlet eigenvalue of the
// concentric annulus b <= |x| <= 1.

namespace annulus {

/// j_{0,1}^2, the first Dirichlet eigenvalue of the unit disc.
inline constexpr double kUnitDiscEigenvalue = 5.783185962946784521;

inline constexpr double kDefaultRootTolerance = 1e-10;

/// Argument at which evaluation switches from the power series (long double
/// accumulation) to the Hankel asymptotic expansion.
inline constexpr double kBesselSeriesLimit = 15.0;

namespace detail {

struct BesselValues {
  double j0, j1, y0, y1;
};

// The two evaluation branches, exposed so their overlap can be tested.
BesselValues bessel_series(double x);
BesselValues bessel_asymptotic(double x);

}  // namespace detail

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);

/// J0(sqrt(mu) b) Y0(sqrt(mu)) - J0(sqrt(mu)) Y0(sqrt(mu) b).
double cross_product(double mu, double b);

/// Smallest positive root of cross_product(., b), bracketed by an upward scan
/// in sqrt(mu) and refined by bisection to relative width `tol`.
double mu_first(double b, double tol = kDefaultRootTolerance);

/// Radially symmetric first eigenfunction of the concentric annulus
///   phi(r) = c1 J0(sqrt(mu) r) + c2 Y0(sqrt(mu) r),   b <= r <= 1,
/// scaled so that the 2-D L2 norm over the annulus is one.
struct RadialMode {
  double mu = 0.0;
  double b = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double value(double r) const;
  double derivative(double r) const;
};

RadialMode radial_mode(double b, double tol = kDefaultRootTolerance);

enum class LowerBoundKind { annulus, disc };

const char* to_string(LowerBoundKind kind);

struct EigenvalueBounds {
  double lower = 0.0;
  double upper = 0.0;
  LowerBoundKind lower_kind = LowerBoundKind::annulus;
};

/// Two-sided bounds from domain monotonicity:
///   mu(a - h) < lambda(h) < mu(a + h)       for h < a,
///   j01^2     < lambda(h) < mu(a + h)       for h >= a ("disc bound").
/// Throws GeometryError when a + h >= 1.
EigenvalueBounds eigenvalue_bounds(double a, double h, double tol = kDefaultRootTolerance);

}  // namespace annulus
