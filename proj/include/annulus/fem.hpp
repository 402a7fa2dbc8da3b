#pragma once

#include <array>
#include <span>
#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/sparse.hpp"

namespace annulus {

using ElementMatrix = std::array<std::array<double, 3>, 3>;

/// (grad phi_i . grad phi_j) * area for the linear hat functions of a triangle.
ElementMatrix element_stiffness(Point p0, Point p1, Point p2);
/// Consistent mass: area / 12 * [2 1 1; 1 2 1; 1 1 2].
ElementMatrix element_mass(Point p0, Point p1, Point p2);

struct GlobalMatrices {
  SparseSymMatrix stiffness;
  SparseSymMatrix mass;
};

/// P1 matrices over every mesh node, boundary included.
GlobalMatrices assemble_full(const Mesh& mesh);

/// Matrices restricted to the free (interior) nodes: homogeneous Dirichlet
/// data on both circles by deleting boundary rows and columns.
struct DirichletSystem {
  SparseSymMatrix stiffness;
  SparseSymMatrix mass;
  std::vector<int> free_nodes;  // free index -> mesh node
};

DirichletSystem assemble(const Mesh& mesh);

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 500;
};

struct EigenResult {
  double lambda = 0.0;
  std::vector<double> u;  // M-normalised, positive at its largest entry
  double residual = 0.0;  // ||K u - lambda M u|| / ||M u||
  int iterations = 0;
};

/// Smallest eigenpair of K u = lambda M u by inverse iteration from the all-ones
/// vector. Once the Rayleigh quotient settles, K is re-factored with a shift
/// sigma < lambda_1 (certified by the Cholesky of K - sigma M succeeding),
/// which makes the remaining iterations contract like
/// (lambda_1 - sigma) / (lambda_2 - sigma) instead of lambda_1 / lambda_2.
/// Stops when |lambda_k - lambda_{k-1}| <= tol lambda_k and residual <= 10 tol.
/// Throws ConvergenceError after max_iter iterations, MatrixError if K is not SPD.
EigenResult smallest_eig(const SparseSymMatrix& stiffness, const SparseSymMatrix& mass,
                         const EigenOptions& options = {});

struct Resolution {
  int n_r = 64;
  int n_theta = 256;
};

/// Eigenpair on a mesh; `eig.u` is indexed by mesh node and zero on both circles.
struct Solution {
  Mesh mesh;
  EigenResult eig;
};

/// generate_mesh -> assemble -> smallest_eig.
Solution solve_lambda(const AnnulusSpec& spec, Resolution resolution = {},
                      const EigenOptions& options = {});

double rayleigh_quotient(const SparseSymMatrix& stiffness, const SparseSymMatrix& mass,
                         std::span<const double> x);

}  // namespace annulus
