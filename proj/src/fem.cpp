#include "annulus/fem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "annulus/cholesky.hpp"
#include "annulus/errors.hpp"
#include "annulus/simd/kernels.hpp"

namespace annulus {

ElementMatrix element_stiffness(Point p0, Point p1, Point p2) {
  const double xs0[] = {p0.x}, ys0[] = {p0.y}, xs1[] = {p1.x}, ys1[] = {p1.y}, xs2[] = {p2.x},
               ys2[] = {p2.y};
  double area, k00, k01, k02, k11, k12, k22;
  simd::active_kernels().p1_stiffness({xs0, ys0, xs1, ys1, xs2, ys2, 1},
                                      {&area, &k00, &k01, &k02, &k11, &k12, &k22});
  if (!(area > 0.0)) throw MeshError("element_stiffness: degenerate or clockwise triangle", {});
  return {{{k00, k01, k02}, {k01, k11, k12}, {k02, k12, k22}}};
}

ElementMatrix element_mass(Point p0, Point p1, Point p2) {
  const double area = 0.5 * twice_signed_area(p0, p1, p2);
  if (!(area > 0.0)) throw MeshError("element_mass: degenerate or clockwise triangle", {});
  const double d = area / 6.0;
  const double o = area / 12.0;
  return {{{d, o, o}, {o, d, o}, {o, o, d}}};
}

GlobalMatrices assemble_full(const Mesh& mesh) {
  const std::size_t count = mesh.triangles.size();
  std::vector<double> coords(6 * count);
  double* x0 = coords.data();
  double* y0 = x0 + count;
  double* x1 = y0 + count;
  double* y1 = x1 + count;
  double* x2 = y1 + count;
  double* y2 = x2 + count;
  for (std::size_t t = 0; t < count; ++t) {
    const Triangle& tri = mesh.triangles[t];
    const Point& a = mesh.nodes[static_cast<std::size_t>(tri[0])];
    const Point& b = mesh.nodes[static_cast<std::size_t>(tri[1])];
    const Point& c = mesh.nodes[static_cast<std::size_t>(tri[2])];
    x0[t] = a.x, y0[t] = a.y, x1[t] = b.x, y1[t] = b.y, x2[t] = c.x, y2[t] = c.y;
  }
  std::vector<double> entries(7 * count);
  double* area = entries.data();
  double* k00 = area + count;
  double* k01 = k00 + count;
  double* k02 = k01 + count;
  double* k11 = k02 + count;
  double* k12 = k11 + count;
  double* k22 = k12 + count;
  simd::active_kernels().p1_stiffness({x0, y0, x1, y1, x2, y2, count},
                                      {area, k00, k01, k02, k11, k12, k22});

  std::vector<SparseSymMatrix::Triplet> stiffness;
  std::vector<SparseSymMatrix::Triplet> mass;
  stiffness.reserve(6 * count);
  mass.reserve(6 * count);
  for (std::size_t t = 0; t < count; ++t) {
    const Triangle& tri = mesh.triangles[t];
    if (!(area[t] > 1e-14)) {
      throw MeshError("assembly: degenerate triangle " + std::to_string(t),
                      {tri[0], tri[1], tri[2]});
    }
    const double diag = area[t] / 6.0;
    const double off = area[t] / 12.0;
    const int i = tri[0], j = tri[1], k = tri[2];
    stiffness.push_back({i, i, k00[t]});
    stiffness.push_back({j, i, k01[t]});
    stiffness.push_back({k, i, k02[t]});
    stiffness.push_back({j, j, k11[t]});
    stiffness.push_back({k, j, k12[t]});
    stiffness.push_back({k, k, k22[t]});
    mass.push_back({i, i, diag});
    mass.push_back({j, i, off});
    mass.push_back({k, i, off});
    mass.push_back({j, j, diag});
    mass.push_back({k, j, off});
    mass.push_back({k, k, diag});
  }
  const int n = static_cast<int>(mesh.num_nodes());
  return {SparseSymMatrix::from_triplets(n, stiffness), SparseSymMatrix::from_triplets(n, mass)};
}

DirichletSystem assemble(const Mesh& mesh) {
  const GlobalMatrices full = assemble_full(mesh);
  DirichletSystem system;
  for (int v = 0; v < static_cast<int>(mesh.num_nodes()); ++v) {
    if (!mesh.is_boundary(v)) system.free_nodes.push_back(v);
  }
  system.stiffness = full.stiffness.principal_submatrix(system.free_nodes);
  system.mass = full.mass.principal_submatrix(system.free_nodes);
  return system;
}

double rayleigh_quotient(const SparseSymMatrix& stiffness, const SparseSymMatrix& mass,
                         std::span<const double> x) {
  const std::vector<double> kx = stiffness.multiply(x);
  const std::vector<double> mx = mass.multiply(x);
  return simd::dot(x, kx) / simd::dot(x, mx);
}

namespace {

// Relative distances below the current Rayleigh quotient tried as shifts, in
// order. Each is accepted only if K - sigma M still factors.
constexpr double kShiftMargins[] = {1e-3, 1e-2, 1e-1};
// Relative Rayleigh-quotient change below which the shift is attempted.
constexpr double kShiftTrigger = 1e-3;
constexpr int kShiftLatestIteration = 8;

double norm2(std::span<const double> v) { return std::sqrt(simd::dot(v, v)); }

}  // namespace

EigenResult smallest_eig(const SparseSymMatrix& stiffness, const SparseSymMatrix& mass,
                         const EigenOptions& options) {
  if (stiffness.dimension() != mass.dimension()) {
    throw MatrixError("smallest_eig: K and M dimensions differ");
  }
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw DomainError("smallest_eig: tol must be positive and max_iter >= 1");
  }
  const auto n = static_cast<std::size_t>(stiffness.dimension());
  if (n == 0) throw MatrixError("smallest_eig: empty matrix");

  const std::vector<int> ordering = reverse_cuthill_mckee(stiffness);
  EnvelopeCholesky solver(stiffness, ordering);
  bool shifted = false;

  std::vector<double> x(n, 1.0);
  std::vector<double> kx = stiffness.multiply(x);
  std::vector<double> mx = mass.multiply(x);
  double lambda_prev = simd::dot(x, kx) / simd::dot(x, mx);
  std::vector<double> r(n);

  EigenResult result;
  for (int it = 1; it <= options.max_iter; ++it) {
    // x <- (K - sigma M)^{-1} M x
    solver.solve_in_place(mx);
    x.swap(mx);
    stiffness.multiply(x, kx);
    mass.multiply(x, mx);
    const double xmx = simd::dot(x, mx);
    if (!(xmx > 0.0) || !std::isfinite(xmx)) throw MatrixError("smallest_eig: M is not positive definite");
    const double lambda = simd::dot(x, kx) / xmx;
    const double scale = 1.0 / std::sqrt(xmx);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] *= scale;
      kx[i] *= scale;
      mx[i] *= scale;
      r[i] = kx[i] - lambda * mx[i];
    }
    const double residual = norm2(r) / norm2(mx);
    const double change = std::fabs(lambda - lambda_prev);

    result.lambda = lambda;
    result.residual = residual;
    result.iterations = it;
    if (change <= options.tol * lambda && residual <= 10.0 * options.tol) {
      result.u = std::move(x);
      const auto peak = static_cast<std::size_t>(std::distance(
          result.u.begin(), std::max_element(result.u.begin(), result.u.end(), [](double a, double b) {
            return std::fabs(a) < std::fabs(b);
          })));
      if (result.u[peak] < 0.0) {
        for (double& v : result.u) v = -v;
      }
      return result;
    }

    if (!shifted && (change <= kShiftTrigger * lambda || it >= kShiftLatestIteration)) {
      shifted = true;  // one attempt; fall back to the plain iteration if every margin fails
      for (double margin : kShiftMargins) {
        const double sigma = lambda * (1.0 - margin);
        try {
          solver = EnvelopeCholesky(
              SparseSymMatrix::linear_combination(1.0, stiffness, -sigma, mass), ordering);
          break;
        } catch (const MatrixError&) {
          // sigma >= lambda_1 of the discrete pencil; back off
        }
      }
    }
    lambda_prev = lambda;
  }
  throw ConvergenceError("smallest_eig: no convergence after " + std::to_string(options.max_iter) +
                             " iterations",
                         result.lambda, result.residual, result.iterations, std::move(x));
}

Solution solve_lambda(const AnnulusSpec& spec, Resolution resolution, const EigenOptions& options) {
  Solution solution{generate_mesh(spec, resolution.n_r, resolution.n_theta), {}};
  const DirichletSystem system = assemble(solution.mesh);
  EigenResult free = smallest_eig(system.stiffness, system.mass, options);
  std::vector<double> nodal(solution.mesh.num_nodes(), 0.0);
  for (std::size_t f = 0; f < system.free_nodes.size(); ++f) {
    nodal[static_cast<std::size_t>(system.free_nodes[f])] = free.u[f];
  }
  free.u = std::move(nodal);
  solution.eig = std::move(free);
  return solution;
}

}  // namespace annulus
