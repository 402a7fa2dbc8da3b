#include "annulus/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "annulus/errors.hpp"

namespace annulus {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Average P1 gradient of u at each ring node over the triangles touching it.
std::vector<Point> ring_gradients(const Mesh& mesh, std::span<const double> u,
                                  std::span<const int> ring) {
  if (u.size() != mesh.num_nodes()) {
    throw MeshError("eigenvector length does not match the mesh", {});
  }
  std::vector<int> slot(mesh.num_nodes(), -1);
  for (std::size_t i = 0; i < ring.size(); ++i) slot[static_cast<std::size_t>(ring[i])] = static_cast<int>(i);

  std::vector<Point> sum(ring.size());
  std::vector<int> count(ring.size(), 0);
  for (const Triangle& t : mesh.triangles) {
    if (slot[static_cast<std::size_t>(t[0])] < 0 && slot[static_cast<std::size_t>(t[1])] < 0 &&
        slot[static_cast<std::size_t>(t[2])] < 0) {
      continue;
    }
    const Point& p0 = mesh.nodes[static_cast<std::size_t>(t[0])];
    const Point& p1 = mesh.nodes[static_cast<std::size_t>(t[1])];
    const Point& p2 = mesh.nodes[static_cast<std::size_t>(t[2])];
    const double area2 = twice_signed_area(p0, p1, p2);
    const double u0 = u[static_cast<std::size_t>(t[0])];
    const double u1 = u[static_cast<std::size_t>(t[1])];
    const double u2 = u[static_cast<std::size_t>(t[2])];
    const Point grad{(u0 * (p1.y - p2.y) + u1 * (p2.y - p0.y) + u2 * (p0.y - p1.y)) / area2,
                     (u0 * (p2.x - p1.x) + u1 * (p0.x - p2.x) + u2 * (p1.x - p0.x)) / area2};
    for (int v : t) {
      const int s = slot[static_cast<std::size_t>(v)];
      if (s < 0) continue;
      sum[static_cast<std::size_t>(s)].x += grad.x;
      sum[static_cast<std::size_t>(s)].y += grad.y;
      ++count[static_cast<std::size_t>(s)];
    }
  }
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (count[i] == 0) throw MeshError("ring node with no adjacent triangle", {ring[i]});
    sum[i].x /= count[i];
    sum[i].y /= count[i];
  }
  return sum;
}

// Arc step from ring entry i to the next one, wrapping past 2 pi.
double arc_step(std::span<const double> phi, std::size_t i) {
  const std::size_t next = (i + 1) % phi.size();
  double step = phi[next] - phi[i];
  if (next == 0) step += kTwoPi;
  return step;
}

// Trapezoid rule over a ring of a circle of `radius`: sum over arcs of the mean
// endpoint value of w times weight(mid-arc angle) times radius * dphi.
template <typename Weight>
double ring_integral(std::span<const double> phi, std::span<const double> w, double radius,
                     Weight weight) {
  double total = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const std::size_t next = (i + 1) % phi.size();
    const double step = arc_step(phi, i);
    const double mid = phi[i] + 0.5 * step;
    total += 0.5 * (w[i] + w[next]) * weight(mid) * radius * step;
  }
  return total;
}

}  // namespace

BoundaryFlux boundary_flux(const Mesh& mesh, const EigenResult& result) {
  BoundaryFlux flux;
  flux.a = mesh.spec.a();
  flux.h = mesh.spec.h();
  flux.nodes = mesh.inner_ring;
  const Point center = mesh.spec.hole_center();
  const std::vector<Point> grads = ring_gradients(mesh, result.u, mesh.inner_ring);
  for (std::size_t i = 0; i < mesh.inner_ring.size(); ++i) {
    const Point& z = mesh.nodes[static_cast<std::size_t>(mesh.inner_ring[i])];
    const double nx = (z.x - center.x) / flux.a;
    const double ny = (z.y - center.y) / flux.a;
    const double un = grads[i].x * nx + grads[i].y * ny;
    flux.phi.push_back(polar_angle(z, center));
    flux.u_n.push_back(un);
    flux.u_n_sq.push_back(un * un);
  }
  return flux;
}

double interpolate_flux_sq(const BoundaryFlux& flux, double phi) {
  const std::size_t n = flux.phi.size();
  if (n == 0) throw DomainError("interpolate_flux_sq: empty flux");
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  // First entry with angle > phi; interpolate between it and its predecessor.
  const auto upper = std::upper_bound(flux.phi.begin(), flux.phi.end(), phi);
  const std::size_t hi = upper == flux.phi.end() ? 0 : static_cast<std::size_t>(upper - flux.phi.begin());
  const std::size_t lo = (hi + n - 1) % n;
  double span = flux.phi[hi] - flux.phi[lo];
  double offset = phi - flux.phi[lo];
  if (span <= 0.0) span += kTwoPi;
  if (offset < 0.0) offset += kTwoPi;
  const double t = span > 0.0 ? offset / span : 0.0;
  return (1.0 - t) * flux.u_n_sq[lo] + t * flux.u_n_sq[hi];
}

double shape_derivative(const Mesh& mesh, const BoundaryFlux& flux) {
  if (flux.phi.size() != mesh.inner_ring.size() || flux.u_n_sq.size() != flux.phi.size()) {
    throw DomainError("shape_derivative: flux does not cover the inner ring");
  }
  // N = (cos phi, sin phi) points into the annulus, so N_1 = cos phi.
  return ring_integral(flux.phi, flux.u_n_sq, mesh.spec.a(), [](double phi) { return std::cos(phi); });
}

double fd_derivative(double a, double h, double delta, Resolution resolution,
                     const EigenOptions& options) {
  if (!(delta > 0.0)) throw DomainError("fd_derivative: delta must be positive");
  if (h - delta < 0.0) {
    throw DomainError("fd_derivative: h - delta < 0; one-sided estimate not supported");
  }
  if (!(h + delta + a < 1.0)) throw GeometryError("fd_derivative: h + delta + a must be < 1");
  const double plus = solve_lambda(AnnulusSpec(a, h + delta), resolution, options).eig.lambda;
  const double minus = solve_lambda(AnnulusSpec(a, h - delta), resolution, options).eig.lambda;
  return (plus - minus) / (2.0 * delta);
}

double rellich_integral(const Mesh& mesh, const EigenResult& result) {
  const double a = mesh.spec.a();
  const double h = mesh.spec.h();

  // Hole boundary: x . N = -(h cos phi + a) with N pointing into the hole.
  const BoundaryFlux inner = boundary_flux(mesh, result);
  const double inner_part =
      ring_integral(inner.phi, inner.u_n_sq, a, [&](double phi) { return -(h * std::cos(phi) + a); });

  // Unit circle: x . N = 1.
  const std::vector<Point> grads = ring_gradients(mesh, result.u, mesh.outer_ring);
  std::vector<double> theta;
  std::vector<double> un_sq;
  for (std::size_t i = 0; i < mesh.outer_ring.size(); ++i) {
    const Point& z = mesh.nodes[static_cast<std::size_t>(mesh.outer_ring[i])];
    const double norm = std::hypot(z.x, z.y);
    const double un = (grads[i].x * z.x + grads[i].y * z.y) / norm;
    theta.push_back(polar_angle(z, {0.0, 0.0}));
    un_sq.push_back(un * un);
  }
  const double outer_part = ring_integral(theta, un_sq, 1.0, [](double) { return 1.0; });
  return inner_part + outer_part;
}

double rellich_check(const Mesh& mesh, const EigenResult& result) {
  const double target = 2.0 * result.lambda;
  return std::fabs(rellich_integral(mesh, result) - target) / target;
}

double rellich_integral_concentric(const RadialMode& mode) {
  const double outer = mode.derivative(1.0);
  const double inner = mode.derivative(mode.b);
  return kTwoPi * (outer * outer - mode.b * mode.b * inner * inner);
}

const char* to_string(FluxMonotonicity::Status status) {
  switch (status) {
    case FluxMonotonicity::Status::pass: return "pass";
    case FluxMonotonicity::Status::fail: return "fail";
    case FluxMonotonicity::Status::not_applicable: return "not applicable";
  }
  return "unknown";
}

FluxMonotonicity flux_monotonicity(const BoundaryFlux& flux) {
  FluxMonotonicity out;
  if (flux.h == 0.0 || flux.u_n_sq.empty()) return out;
  const double peak = *std::max_element(flux.u_n_sq.begin(), flux.u_n_sq.end());
  const double slack = 1e-3 * peak;
  out.status = FluxMonotonicity::Status::pass;
  std::size_t prev = flux.phi.size();
  for (std::size_t i = 0; i < flux.phi.size(); ++i) {
    if (flux.phi[i] > std::numbers::pi + 1e-12) break;
    if (prev < flux.phi.size() && flux.u_n_sq[i] < flux.u_n_sq[prev] - slack) {
      out.status = FluxMonotonicity::Status::fail;
      out.phi_before = flux.phi[prev];
      out.phi_after = flux.phi[i];
      return out;
    }
    prev = i;
  }
  return out;
}

bool SweepReport::all_solved() const {
  return std::all_of(points.begin(), points.end(), [](const SweepPoint& p) { return p.ok; });
}

bool SweepReport::lambda_strictly_decreasing() const {
  const SweepPoint* prev = nullptr;
  for (const SweepPoint& p : points) {
    if (!p.ok) continue;
    if (prev != nullptr && !(p.lambda < prev->lambda)) return false;
    prev = &p;
  }
  return true;
}

bool SweepReport::bounds_hold() const {
  for (const SweepPoint& p : points) {
    if (!p.ok) continue;
    if (!(p.lambda > p.bounds.lower)) return false;
    if (p.h > 0.0 && !(p.lambda < p.bounds.upper)) return false;
  }
  return true;
}

SweepReport sweep(double a, std::span<const double> h_grid, Resolution resolution,
                  const EigenOptions& options) {
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    AnnulusSpec(a, h_grid[i]);  // validates
    if (i > 0 && !(h_grid[i] > h_grid[i - 1])) throw GeometryError("sweep: h grid must ascend");
  }
  SweepReport report;
  report.a = a;
  report.resolution = resolution;
  for (double h : h_grid) {
    SweepPoint point;
    point.h = h;
    point.fd_check = std::numeric_limits<double>::quiet_NaN();
    try {
      const Solution solution = solve_lambda(AnnulusSpec(a, h), resolution, options);
      point.lambda = solution.eig.lambda;
      point.residual = solution.eig.residual;
      point.iterations = solution.eig.iterations;
      point.flux = boundary_flux(solution.mesh, solution.eig);
      point.lambda_dot = shape_derivative(solution.mesh, point.flux);
      point.bounds = eigenvalue_bounds(a, h);
      point.ok = true;
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    report.points.push_back(std::move(point));
  }
  for (std::size_t i = 1; i + 1 < report.points.size(); ++i) {
    const SweepPoint& left = report.points[i - 1];
    const SweepPoint& right = report.points[i + 1];
    if (left.ok && right.ok && report.points[i].ok) {
      report.points[i].fd_check = (right.lambda - left.lambda) / (right.h - left.h);
    }
  }
  return report;
}

}  // namespace annulus
