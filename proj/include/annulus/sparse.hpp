#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace annulus {

/// Symmetric sparse matrix stored as the lower triangle in compressed rows.
/// Columns within a row are ascending, so the diagonal (when present) is last.
class SparseSymMatrix {
 public:
  struct Triplet {
    int row;
    int col;
    double value;
  };

  SparseSymMatrix() = default;

  /// Upper-triangle triplets are folded into the lower triangle. Duplicates
  /// are summed in input order, so equal inputs give bitwise-equal matrices.
  static SparseSymMatrix from_triplets(int dimension, std::span<const Triplet> triplets);
  static SparseSymMatrix identity(int dimension);

  int dimension() const noexcept { return dimension_; }
  std::size_t stored_entries() const noexcept { return values_.size(); }
  std::span<const int> row_offsets() const noexcept { return row_offsets_; }
  std::span<const int> columns() const noexcept { return columns_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Logical entry (i, j) of the symmetric matrix; zero if not stored.
  double at(int i, int j) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  /// Principal submatrix on `keep` (ascending, distinct); row k of the result
  /// is row keep[k] of this matrix.
  SparseSymMatrix principal_submatrix(std::span<const int> keep) const;

  /// alpha * A + beta * B on the union sparsity pattern.
  static SparseSymMatrix linear_combination(double alpha, const SparseSymMatrix& a, double beta,
                                            const SparseSymMatrix& b);

 private:
  int dimension_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> columns_;
  std::vector<double> values_;
};

}  // namespace annulus
