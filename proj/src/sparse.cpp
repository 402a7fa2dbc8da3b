#include "annulus/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "annulus/errors.hpp"
#include "annulus/simd/kernels.hpp"

namespace annulus {

SparseSymMatrix SparseSymMatrix::from_triplets(int dimension, std::span<const Triplet> triplets) {
  if (dimension < 0) throw MatrixError("negative dimension");
  std::vector<Triplet> lower(triplets.begin(), triplets.end());
  for (Triplet& t : lower) {
    if (t.row < 0 || t.col < 0 || t.row >= dimension || t.col >= dimension) {
      throw MatrixError("triplet index out of range");
    }
    if (t.col > t.row) std::swap(t.row, t.col);
  }
  std::stable_sort(lower.begin(), lower.end(), [](const Triplet& l, const Triplet& r) {
    return l.row != r.row ? l.row < r.row : l.col < r.col;
  });

  SparseSymMatrix m;
  m.dimension_ = dimension;
  m.row_offsets_.assign(static_cast<std::size_t>(dimension) + 1, 0);
  for (std::size_t i = 0; i < lower.size();) {
    const int row = lower[i].row;
    const int col = lower[i].col;
    double sum = 0.0;
    for (; i < lower.size() && lower[i].row == row && lower[i].col == col; ++i) sum += lower[i].value;
    m.columns_.push_back(col);
    m.values_.push_back(sum);
    ++m.row_offsets_[static_cast<std::size_t>(row) + 1];
  }
  std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(), m.row_offsets_.begin());
  return m;
}

SparseSymMatrix SparseSymMatrix::identity(int dimension) {
  std::vector<Triplet> diagonal;
  diagonal.reserve(static_cast<std::size_t>(dimension));
  for (int i = 0; i < dimension; ++i) diagonal.push_back({i, i, 1.0});
  return from_triplets(dimension, diagonal);
}

double SparseSymMatrix::at(int i, int j) const {
  if (j > i) std::swap(i, j);
  const auto begin = columns_.begin() + row_offsets_[static_cast<std::size_t>(i)];
  const auto end = columns_.begin() + row_offsets_[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

void SparseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const auto n = static_cast<std::size_t>(dimension_);
  if (x.size() != n || y.size() != n) throw MatrixError("multiply: size mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  const simd::KernelTable& k = simd::active_kernels();
  for (std::size_t i = 0; i < n; ++i) {
    const auto begin = static_cast<std::size_t>(row_offsets_[i]);
    const auto end = static_cast<std::size_t>(row_offsets_[i + 1]);
    // Row part (lower triangle including the diagonal).
    y[i] += k.gather_dot(values_.data() + begin, columns_.data() + begin, x.data(), end - begin);
    // Mirrored strictly-upper part.
    const double xi = x[i];
    for (std::size_t e = begin; e < end; ++e) {
      const auto col = static_cast<std::size_t>(columns_[e]);
      if (col != i) y[col] += values_[e] * xi;
    }
  }
}

std::vector<double> SparseSymMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(dimension_));
  multiply(x, y);
  return y;
}

SparseSymMatrix SparseSymMatrix::principal_submatrix(std::span<const int> keep) const {
  std::vector<int> new_index(static_cast<std::size_t>(dimension_), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (k > 0 && keep[k] <= keep[k - 1]) throw MatrixError("principal_submatrix: keep must ascend");
    new_index[static_cast<std::size_t>(keep[k])] = static_cast<int>(k);
  }
  SparseSymMatrix m;
  m.dimension_ = static_cast<int>(keep.size());
  m.row_offsets_.assign(keep.size() + 1, 0);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto row = static_cast<std::size_t>(keep[k]);
    for (auto e = static_cast<std::size_t>(row_offsets_[row]);
         e < static_cast<std::size_t>(row_offsets_[row + 1]); ++e) {
      const int col = new_index[static_cast<std::size_t>(columns_[e])];
      if (col < 0) continue;
      m.columns_.push_back(col);
      m.values_.push_back(values_[e]);
    }
    m.row_offsets_[k + 1] = static_cast<int>(m.columns_.size());
  }
  return m;
}

SparseSymMatrix SparseSymMatrix::linear_combination(double alpha, const SparseSymMatrix& a,
                                                    double beta, const SparseSymMatrix& b) {
  if (a.dimension_ != b.dimension_) throw MatrixError("linear_combination: dimension mismatch");
  SparseSymMatrix m;
  m.dimension_ = a.dimension_;
  m.row_offsets_.assign(static_cast<std::size_t>(a.dimension_) + 1, 0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(a.dimension_); ++i) {
    auto ea = static_cast<std::size_t>(a.row_offsets_[i]);
    auto eb = static_cast<std::size_t>(b.row_offsets_[i]);
    const auto end_a = static_cast<std::size_t>(a.row_offsets_[i + 1]);
    const auto end_b = static_cast<std::size_t>(b.row_offsets_[i + 1]);
    while (ea < end_a || eb < end_b) {
      const int ca = ea < end_a ? a.columns_[ea] : a.dimension_;
      const int cb = eb < end_b ? b.columns_[eb] : b.dimension_;
      double v = 0.0;
      const int col = std::min(ca, cb);
      if (ca == col) v += alpha * a.values_[ea++];
      if (cb == col) v += beta * b.values_[eb++];
      m.columns_.push_back(col);
      m.values_.push_back(v);
    }
    m.row_offsets_[i + 1] = static_cast<int>(m.columns_.size());
  }
  return m;
}

}  // namespace annulus
