#include "annulus/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "annulus/errors.hpp"

namespace annulus {
namespace {

using Real = long double;

constexpr Real kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr Real kPi = 3.141592653589793238462643383279502884L;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(fn) + ": argument must be finite");
  }
}

// Power series around the origin, t = (x/2)^2:
//   J0 = sum (-t)^k / (k!)^2
//   J1 = (x/2) sum (-t)^k / (k! (k+1)!)
// plus the harmonic-number sums needed for Y0 and Y1. Accumulated in long
// double; the largest term at x = 15 is ~1e5, so cancellation stays below
// double rounding.
struct SeriesTerms {
  Real j0 = 0;
  Real j1 = 0;
  Real y0_sum = 0;  // sum_{k>=1} (-1)^{k+1} H_k t^k / (k!)^2
  Real y1_sum = 0;  // sum_{k>=0} (-1)^k (H_k + H_{k+1}) (x/2)^{2k+1} / (k!(k+1)!)
};

SeriesTerms power_series(Real x) {
  const Real half = x / 2;
  const Real t = half * half;
  SeriesTerms s;
  Real term0 = 1;     // (-t)^k / (k!)^2
  Real term1 = half;  // (-1)^k (x/2)^{2k+1} / (k!(k+1)!)
  Real harmonic = 0;  // H_k
  s.j0 = term0;
  s.j1 = term1;
  s.y1_sum = term1 * 1;  // H_0 + H_1 = 1
  for (int k = 1; k < 200; ++k) {
    term0 *= -t / (Real(k) * k);
    term1 *= -t / (Real(k) * (k + 1));
    harmonic += Real(1) / k;
    const Real harmonic_next = harmonic + Real(1) / (k + 1);
    s.j0 += term0;
    s.j1 += term1;
    s.y0_sum -= harmonic * term0;
    s.y1_sum += (harmonic + harmonic_next) * term1;
    if (k > half && std::fabs(term0) * harmonic_next < 1e-24L &&
        std::fabs(term1) * harmonic_next < 1e-24L) {
      break;
    }
  }
  return s;
}

// Hankel asymptotic expansion for order nu in {0, 1}:
//   J = sqrt(2/(pi x)) (P cos chi - Q sin chi)
//   Y = sqrt(2/(pi x)) (P sin chi + Q cos chi),  chi = x - (2 nu + 1) pi / 4
struct Asymptotic {
  double j;
  double y;
};

Asymptotic hankel(int nu, double x) {
  const Real mu4 = Real(4) * nu * nu;
  Real p = 1;
  Real q = 0;
  Real term = 1;
  Real last = 1;
  for (int k = 1; k < 100; ++k) {
    const Real odd = 2 * k - 1;
    term *= (mu4 - odd * odd) / (Real(8) * k * x);
    const Real mag = std::fabs(term);
    if (mag > last || mag < 1e-20L) break;  // divergent tail or converged
    last = mag;
    // k = 1, 2, 3, 4, ... -> +Q, -P, -Q, +P, ...
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
  }
  const Real chi = Real(x) - (2 * nu + 1) * kPi / 4;
  const Real scale = std::sqrt(2 / (kPi * x));
  const Real c = std::cos(chi);
  const Real s = std::sin(chi);
  return {static_cast<double>(scale * (p * c - q * s)),
          static_cast<double>(scale * (p * s + q * c))};
}

// Composite 8-point Gauss-Legendre rule on [lo, hi].
template <typename F>
double integrate(F&& f, double lo, double hi, int panels) {
  static constexpr std::array<double, 4> nodes = {0.1834346424956498, 0.5255324099163290,
                                                  0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> weights = {0.3626837833783620, 0.3137066458778873,
                                                    0.2223810344533745, 0.1012285362903763};
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      total += weights[i] * half * (f(mid - half * nodes[i]) + f(mid + half * nodes[i]));
    }
  }
  return total;
}

void require_inner_radius(double b, const char* fn) {
  if (!(b > 0.0 && b < 1.0)) {
    throw DomainError(std::string(fn) + ": b must lie in (0,1)");
  }
}

}  // namespace

namespace detail {

BesselValues bessel_series(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_series: argument must be positive");
  const SeriesTerms s = power_series(x);
  const Real log_term = std::log(Real(x) / 2) + kEulerGamma;
  return {static_cast<double>(s.j0), static_cast<double>(s.j1),
          static_cast<double>(2 / kPi * (log_term * s.j0 + s.y0_sum)),
          static_cast<double>(2 / kPi * log_term * s.j1 - 2 / (kPi * x) - s.y1_sum / kPi)};
}

BesselValues bessel_asymptotic(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_asymptotic: argument must be positive");
  const Asymptotic order0 = hankel(0, x);
  const Asymptotic order1 = hankel(1, x);
  return {order0.j, order1.j, order0.y, order1.y};
}

}  // namespace detail

double bessel_j0(double x) {
  require_finite(x, "bessel_j0");
  x = std::fabs(x);
  if (x < kBesselSeriesLimit) return static_cast<double>(power_series(x).j0);
  return hankel(0, x).j;
}

double bessel_j1(double x) {
  require_finite(x, "bessel_j1");
  const double sign = x < 0 ? -1.0 : 1.0;
  x = std::fabs(x);
  if (x < kBesselSeriesLimit) return sign * static_cast<double>(power_series(x).j1);
  return sign * hankel(1, x).j;
}

double bessel_y0(double x) {
  require_finite(x, "bessel_y0");
  if (!(x > 0.0)) throw DomainError("bessel_y0: argument must be positive");
  if (x < kBesselSeriesLimit) return detail::bessel_series(x).y0;
  return hankel(0, x).y;
}

double bessel_y1(double x) {
  require_finite(x, "bessel_y1");
  if (!(x > 0.0)) throw DomainError("bessel_y1: argument must be positive");
  if (x < kBesselSeriesLimit) return detail::bessel_series(x).y1;
  return hankel(1, x).y;
}

double cross_product(double mu, double b) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("cross_product: mu must be positive");
  }
  require_inner_radius(b, "cross_product");
  const double k = std::sqrt(mu);
  return bessel_j0(k * b) * bessel_y0(k) - bessel_j0(k) * bessel_y0(k * b);
}

double mu_first(double b, double tol) {
  require_inner_radius(b, "mu_first");
  if (!(tol > 0.0)) throw DomainError("mu_first: tol must be positive");

  // f(k^2, b) ~ -(2/pi) ln b > 0 as k -> 0, so the first sign change in the
  // scan brackets the smallest root.
  const double step = std::min(0.1, (1.0 - b) / 10.0);
  const double scan_limit = 10.0 * std::numbers::pi / (1.0 - b);
  double k_lo = step;
  double f_lo = cross_product(k_lo * k_lo, b);
  double k_hi = k_lo;
  bool bracketed = false;
  for (int i = 2; k_lo <= scan_limit; ++i) {
    k_hi = i * step;
    const double f_hi = cross_product(k_hi * k_hi, b);
    if (f_hi == 0.0) return k_hi * k_hi;
    if ((f_lo < 0.0) != (f_hi < 0.0)) {
      bracketed = true;
      break;
    }
    k_lo = k_hi;
    f_lo = f_hi;
  }
  if (!bracketed) {
    throw InternalError("mu_first: no sign change below sqrt(mu) = 10 pi / (1 - b)");
  }

  double lo = k_lo * k_lo;
  double hi = k_hi * k_hi;
  const bool lo_positive = f_lo > 0.0;
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = cross_product(mid, b);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double RadialMode::value(double r) const {
  const double k = std::sqrt(mu);
  return c1 * bessel_j0(k * r) + c2 * bessel_y0(k * r);
}

double RadialMode::derivative(double r) const {
  const double k = std::sqrt(mu);
  return -k * (c1 * bessel_j1(k * r) + c2 * bessel_y1(k * r));
}

RadialMode radial_mode(double b, double tol) {
  RadialMode mode;
  mode.b = b;
  mode.mu = mu_first(b, tol);
  const double k = std::sqrt(mode.mu);
  // Exact at r = 1; at r = b up to the root tolerance.
  mode.c1 = bessel_y0(k);
  mode.c2 = -bessel_j0(k);
  const double norm_sq = 2.0 * std::numbers::pi *
                         integrate([&](double r) { return r * mode.value(r) * mode.value(r); },
                                   b, 1.0, 128);
  double scale = 1.0 / std::sqrt(norm_sq);
  if (mode.value(0.5 * (1.0 + b)) < 0.0) scale = -scale;
  mode.c1 *= scale;
  mode.c2 *= scale;
  return mode;
}

const char* to_string(LowerBoundKind kind) {
  return kind == LowerBoundKind::annulus ? "annulus" : "disc";
}

EigenvalueBounds eigenvalue_bounds(double a, double h, double tol) {
  if (!(a > 0.0 && a < 1.0)) throw GeometryError("a must lie in (0,1)");
  if (!(h >= 0.0) || !std::isfinite(h)) throw GeometryError("h must be non-negative");
  if (!(a + h < 1.0)) {
    throw GeometryError("a + h must be < 1 (inner disc strictly inside the unit disc)");
  }
  EigenvalueBounds bounds;
  bounds.upper = mu_first(a + h, tol);
  if (h == 0.0) {
    bounds.lower = bounds.upper;
  } else if (h < a) {
    bounds.lower = mu_first(a - h, tol);
  } else {
    bounds.lower = kUnitDiscEigenvalue;
    bounds.lower_kind = LowerBoundKind::disc;
  }
  return bounds;
}

}  // namespace annulus
