#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace annulus {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Unit disc minus the closed disc of radius a centred at (h, 0).
/// Construction validates 0 < a < 1, h >= 0 and a + h < 1.
class AnnulusSpec {
 public:
  AnnulusSpec(double a, double h);

  double a() const noexcept { return a_; }
  double h() const noexcept { return h_; }
  Point hole_center() const noexcept { return {h_, 0.0}; }

 private:
  double a_;
  double h_;
};

/// w -> (w + alpha) / (1 + alpha w) maps rho <= |w| <= 1 onto the eccentric
/// annulus, the circle |w| = rho onto the hole boundary |z - h| = a.
struct ConformalMap {
  double alpha = 0.0;
  double rho = 0.0;
};

ConformalMap conformal_params(const AnnulusSpec& spec);
Point map_to_physical(const ConformalMap& map, Point w);

enum class NodeClass : std::uint8_t { interior, outer_boundary, inner_boundary };

using Triangle = std::array<int, 3>;

struct Mesh {
  explicit Mesh(const AnnulusSpec& s) : spec(s) {}

  AnnulusSpec spec;
  int n_r = 0;
  int n_theta = 0;
  std::vector<Point> nodes;
  std::vector<Triangle> triangles;  // counterclockwise
  std::vector<NodeClass> node_class;
  std::vector<int> inner_ring;  // ascending angle about the hole centre
  std::vector<int> outer_ring;  // ascending angle about the origin

  std::size_t num_nodes() const noexcept { return nodes.size(); }
  bool is_boundary(int node) const noexcept {
    return node_class[static_cast<std::size_t>(node)] != NodeClass::interior;
  }
};

/// Twice the signed area of (p0, p1, p2); positive when counterclockwise.
double twice_signed_area(Point p0, Point p1, Point p2) noexcept;

/// Angle of p about `center`, measured from the positive x-direction, in [0, 2 pi).
double polar_angle(Point p, Point center) noexcept;

/// Conformally mapped structured grid. Node (j, k) has preimage
///   r_j (cos theta_k, sin theta_k),  r_j = rho (1/rho)^(j/n_r),  theta_k = 2 pi k / n_theta,
/// and index j * n_theta + k. Ring j = 0 is the hole boundary, j = n_r the unit circle.
/// Requires n_r >= 4 and an even n_theta >= 16.
Mesh generate_mesh(const AnnulusSpec& spec, int n_r, int n_theta);

/// "v x y" per node, then "t i j k" per triangle (0-based).
void write_mesh(std::ostream& out, const Mesh& mesh);

/// Smallest interior angle over all triangles, in degrees.
double min_angle_degrees(const Mesh& mesh);

}  // namespace annulus
