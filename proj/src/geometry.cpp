#include "annulus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "annulus/errors.hpp"

namespace annulus {

AnnulusSpec::AnnulusSpec(double a, double h) : a_(a), h_(h) {
  if (!(a > 0.0 && a < 1.0)) throw GeometryError("a must lie in (0,1)");
  if (!(h >= 0.0) || !std::isfinite(h)) throw GeometryError("h must be non-negative");
  if (!(a + h < 1.0)) {
    throw GeometryError("a + h must be < 1 (inner disc strictly inside the unit disc)");
  }
}

ConformalMap conformal_params(const AnnulusSpec& spec) {
  if (spec.h() == 0.0) return {0.0, spec.a()};
  // The real points -rho, rho must land on q = h - a and p = h + a:
  //   alpha^2 (p + q) - 2 alpha (1 + p q) + (p + q) = 0.
  const double p = spec.h() + spec.a();
  const double q = spec.h() - spec.a();
  const double sum = p + q;
  const double c = 1.0 + p * q;
  // Stable form of (c - sqrt(c^2 - sum^2)) / sum.
  const double alpha = sum / (c + std::sqrt(c * c - sum * sum));
  const double rho = std::fabs((alpha - q) / (1.0 - alpha * q));
  return {alpha, rho};
}

Point map_to_physical(const ConformalMap& map, Point w) {
  const std::complex<double> wc(w.x, w.y);
  const std::complex<double> z = (wc + map.alpha) / (1.0 + map.alpha * wc);
  return {z.real(), z.imag()};
}

double twice_signed_area(Point p0, Point p1, Point p2) noexcept {
  return (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
}

double polar_angle(Point p, Point center) noexcept {
  double phi = std::atan2(p.y - center.y, p.x - center.x);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
  return phi;
}

namespace {

// Diagonal (j,k)-(j+1,k+1) versus (j,k+1)-(j+1,k). Mirrored across the x-axis
// always, and across the y-axis too when the quadrants hold whole cells.
bool rising_diagonal(int k, int n_theta) {
  if (n_theta % 4 == 0) {
    const int quadrant = k / (n_theta / 4);
    return quadrant == 0 || quadrant == 2;
  }
  return k < n_theta / 2;
}

std::vector<int> ring_by_angle(const Mesh& mesh, int j, Point center) {
  std::vector<int> ring(static_cast<std::size_t>(mesh.n_theta));
  for (int k = 0; k < mesh.n_theta; ++k) ring[static_cast<std::size_t>(k)] = j * mesh.n_theta + k;
  std::stable_sort(ring.begin(), ring.end(), [&](int lhs, int rhs) {
    return polar_angle(mesh.nodes[static_cast<std::size_t>(lhs)], center) <
           polar_angle(mesh.nodes[static_cast<std::size_t>(rhs)], center);
  });
  return ring;
}

}  // namespace

Mesh generate_mesh(const AnnulusSpec& spec, int n_r, int n_theta) {
  if (n_r < 4) throw DomainError("n_r must be >= 4");
  if (n_theta < 16 || n_theta % 2 != 0) throw DomainError("n_theta must be even and >= 16");

  const ConformalMap map = conformal_params(spec);
  Mesh mesh(spec);
  mesh.n_r = n_r;
  mesh.n_theta = n_theta;
  const auto node_count = static_cast<std::size_t>((n_r + 1) * n_theta);
  mesh.nodes.resize(node_count);
  mesh.node_class.assign(node_count, NodeClass::interior);

  const int half = n_theta / 2;
  for (int j = 0; j <= n_r; ++j) {
    // j / n_r and k / n_theta are formed the same way on every grid so that
    // nested grids reproduce coarse nodes bit for bit.
    double r = map.rho * std::pow(1.0 / map.rho, static_cast<double>(j) / n_r);
    if (j == 0) r = map.rho;
    if (j == n_r) r = 1.0;
    for (int k = 0; k <= half; ++k) {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) / n_theta);
      Point w{r * std::cos(theta), r * std::sin(theta)};
      if (k == 0 || k == half) w.y = 0.0;
      if (k == half) w.x = -r;
      Point z = map_to_physical(map, w);
      if (k == 0 || k == half) z.y = 0.0;
      mesh.nodes[static_cast<std::size_t>(j * n_theta + k)] = z;
      if (k != 0 && k != half) {
        mesh.nodes[static_cast<std::size_t>(j * n_theta + (n_theta - k))] = {z.x, -z.y};
      }
    }
    const NodeClass cls = j == 0      ? NodeClass::inner_boundary
                          : j == n_r ? NodeClass::outer_boundary
                                     : NodeClass::interior;
    for (int k = 0; k < n_theta; ++k) mesh.node_class[static_cast<std::size_t>(j * n_theta + k)] = cls;
  }

  mesh.triangles.reserve(static_cast<std::size_t>(2 * n_r * n_theta));
  for (int j = 0; j < n_r; ++j) {
    for (int k = 0; k < n_theta; ++k) {
      const int k1 = (k + 1) % n_theta;
      const int a = j * n_theta + k;
      const int b = j * n_theta + k1;
      const int c = (j + 1) * n_theta + k1;
      const int d = (j + 1) * n_theta + k;
      if (rising_diagonal(k, n_theta)) {
        mesh.triangles.push_back({a, c, b});
        mesh.triangles.push_back({a, d, c});
      } else {
        mesh.triangles.push_back({a, d, b});
        mesh.triangles.push_back({b, d, c});
      }
    }
  }

  for (const Triangle& t : mesh.triangles) {
    const double area2 = twice_signed_area(mesh.nodes[static_cast<std::size_t>(t[0])],
                                           mesh.nodes[static_cast<std::size_t>(t[1])],
                                           mesh.nodes[static_cast<std::size_t>(t[2])]);
    if (!(area2 > 2e-14)) {
      throw MeshError("degenerate triangle (" + std::to_string(t[0]) + ", " +
                          std::to_string(t[1]) + ", " + std::to_string(t[2]) + ")",
                      {t[0], t[1], t[2]});
    }
  }

  mesh.inner_ring = ring_by_angle(mesh, 0, spec.hole_center());
  mesh.outer_ring = ring_by_angle(mesh, n_r, Point{0.0, 0.0});
  return mesh;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  char buffer[64];
  for (const Point& p : mesh.nodes) {
    std::snprintf(buffer, sizeof buffer, "v %.17g %.17g\n", p.x, p.y);
    out << buffer;
  }
  for (const Triangle& t : mesh.triangles) {
    out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

double min_angle_degrees(const Mesh& mesh) {
  double smallest = 180.0;
  for (const Triangle& t : mesh.triangles) {
    for (int v = 0; v < 3; ++v) {
      const Point& p = mesh.nodes[static_cast<std::size_t>(t[v])];
      const Point& q = mesh.nodes[static_cast<std::size_t>(t[(v + 1) % 3])];
      const Point& s = mesh.nodes[static_cast<std::size_t>(t[(v + 2) % 3])];
      const double ux = q.x - p.x, uy = q.y - p.y;
      const double vx = s.x - p.x, vy = s.y - p.y;
      const double angle = std::atan2(std::fabs(ux * vy - uy * vx), ux * vx + uy * vy);
      smallest = std::min(smallest, angle * 180.0 / std::numbers::pi);
    }
  }
  return smallest;
}

}  // namespace annulus
