#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "annulus/sparse.hpp"

namespace annulus {

/// Reverse Cuthill-McKee ordering of the matrix graph, started from a
/// pseudo-peripheral node in each connected component. Entry p is the
/// original index placed at position p.
std::vector<int> reverse_cuthill_mckee(const SparseSymMatrix& a);

/// Cholesky factor L (A = L L^T) held in envelope (skyline) form: row i of the
/// permuted matrix keeps columns first(i)..i. Fill stays inside the envelope,
/// so a bandwidth-reducing ordering bounds the storage.
class EnvelopeCholesky {
 public:
  /// Orders with reverse Cuthill-McKee, then factors.
  explicit EnvelopeCholesky(const SparseSymMatrix& a);
  /// `ordering[p]` is the original index placed at position p.
  EnvelopeCholesky(const SparseSymMatrix& a, std::vector<int> ordering);

  int dimension() const noexcept { return static_cast<int>(ordering_.size()); }
  std::size_t envelope_size() const noexcept { return factor_.size(); }
  /// Largest row extent i - first(i) in the permuted matrix.
  int bandwidth() const noexcept { return bandwidth_; }

  /// Overwrites b with A^{-1} b.
  void solve_in_place(std::span<double> b) const;
  std::vector<double> solve(std::span<const double> b) const;

 private:
  void factor(const SparseSymMatrix& a);

  std::vector<int> ordering_;
  std::vector<int> first_;
  std::vector<std::size_t> row_start_;
  std::vector<double> factor_;
  int bandwidth_ = 0;
};

}  // namespace annulus
