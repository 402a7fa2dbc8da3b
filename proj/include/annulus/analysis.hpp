#pragma once

#include <span>
#include <string>
#include <vector>

#include "annulus/fem.hpp"
#include "annulus/geometry.hpp"
#include "annulus/special_functions.hpp"

namespace annulus {

/// Normal derivative of the eigenfunction on the hole boundary. The normal
/// points from the hole into the annulus, so u_n >= 0 for the positive mode.
/// Entries are ordered by phi, the angle about the hole centre (h, 0); phi = 0
/// faces the nearest part of the unit circle.
struct BoundaryFlux {
  double a = 0.0;
  double h = 0.0;
  std::vector<int> nodes;
  std::vector<double> phi;
  std::vector<double> u_n;
  std::vector<double> u_n_sq;
};

/// Per-node average of the piecewise-constant P1 gradient over the triangles
/// touching the node, projected on the exact circle normal.
BoundaryFlux boundary_flux(const Mesh& mesh, const EigenResult& result);

/// u_n^2 at angle phi by linear interpolation between neighbouring ring nodes
/// (periodic in phi).
double interpolate_flux_sq(const BoundaryFlux& flux, double phi);

/// d lambda / dh = integral over the hole boundary of u_N^2 N_1 ds, by the
/// trapezoid rule on ring arcs with the exact arc length a * dphi.
double shape_derivative(const Mesh& mesh, const BoundaryFlux& flux);

/// Central difference (lambda(h + delta) - lambda(h - delta)) / (2 delta) at
/// fixed resolution. Rejects h - delta < 0 rather than going one-sided.
double fd_derivative(double a, double h, double delta, Resolution resolution = {},
                     const EigenOptions& options = {});

/// Boundary integral of (x . N) u_N^2 over both circles, N the outward normal of
/// the annulus. Equals 2 lambda for an L2-normalised Dirichlet eigenfunction.
double rellich_integral(const Mesh& mesh, const EigenResult& result);

/// |rellich_integral - 2 lambda| / (2 lambda).
double rellich_check(const Mesh& mesh, const EigenResult& result);

/// The same boundary integral for the concentric annulus, evaluated from the
/// radial Bessel mode: 2 pi (phi'(1)^2 - b^2 phi'(b)^2).
double rellich_integral_concentric(const RadialMode& mode);

struct FluxMonotonicity {
  enum class Status { pass, fail, not_applicable };
  Status status = Status::not_applicable;
  // First violating pair of consecutive angles when status == fail.
  double phi_before = 0.0;
  double phi_after = 0.0;
};

const char* to_string(FluxMonotonicity::Status status);

/// u_n^2 nondecreasing in phi over [0, pi], allowing a drop of 1e-3 max(u_n^2)
/// per step. Not applicable to the concentric case.
FluxMonotonicity flux_monotonicity(const BoundaryFlux& flux);

struct SweepPoint {
  double h = 0.0;
  bool ok = false;
  std::string error;
  double lambda = 0.0;
  double lambda_dot = 0.0;
  double fd_check = 0.0;  // NaN unless both neighbours solved
  EigenvalueBounds bounds;
  double residual = 0.0;
  int iterations = 0;
  BoundaryFlux flux;
};

struct SweepReport {
  double a = 0.0;
  Resolution resolution;
  std::vector<SweepPoint> points;

  bool all_solved() const;
  bool lambda_strictly_decreasing() const;
  /// lower < lambda < upper where the bounds apply (the upper bound is skipped
  /// at h = 0, where it coincides with the concentric value).
  bool bounds_hold() const;
  bool invariants_hold() const {
    return all_solved() && lambda_strictly_decreasing() && bounds_hold();
  }
};

/// Solves every grid point (independently; failures are recorded per point)
/// and fills fd_check at interior points from the neighbouring solves.
/// Throws GeometryError up front if any point is invalid or the grid is not ascending.
SweepReport sweep(double a, std::span<const double> h_grid, Resolution resolution = {},
                  const EigenOptions& options = {});

}  // namespace annulus
