#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace annulus {

/// Argument outside the mathematical domain of a function (non-finite input,
/// x <= 0 for Y0, radius outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Annulus parameters that do not describe a hole strictly inside the unit disc.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mesh integrity failure. Carries the node indices involved.
class MeshError : public std::runtime_error {
 public:
  MeshError(const std::string& what, std::vector<int> indices)
      : std::runtime_error(what), indices_(std::move(indices)) {}

  const std::vector<int>& indices() const noexcept { return indices_; }

 private:
  std::vector<int> indices_;
};

/// Factorization breakdown or incompatible operands.
class MatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative eigensolver ran out of iterations. Keeps the last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lambda, double residual,
                   int iterations, std::vector<double> last_iterate)
      : std::runtime_error(what),
        lambda_(lambda),
        residual_(residual),
        iterations_(iterations),
        last_iterate_(std::move(last_iterate)) {}

  double lambda() const noexcept { return lambda_; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  double lambda_;
  double residual_;
  int iterations_;
  std::vector<double> last_iterate_;
};

/// Should-not-happen condition, e.g. a root scan that never changes sign.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace annulus
