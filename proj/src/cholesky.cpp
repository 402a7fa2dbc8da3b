#include "annulus/cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "annulus/errors.hpp"
#include "annulus/simd/kernels.hpp"

namespace annulus {
namespace {

using Adjacency = std::vector<std::vector<int>>;

Adjacency build_adjacency(const SparseSymMatrix& a) {
  Adjacency adj(static_cast<std::size_t>(a.dimension()));
  const auto offsets = a.row_offsets();
  const auto cols = a.columns();
  for (int i = 0; i < a.dimension(); ++i) {
    for (int e = offsets[static_cast<std::size_t>(i)]; e < offsets[static_cast<std::size_t>(i) + 1]; ++e) {
      const int j = cols[static_cast<std::size_t>(e)];
      if (j == i) continue;
      adj[static_cast<std::size_t>(i)].push_back(j);
      adj[static_cast<std::size_t>(j)].push_back(i);
    }
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

// Level structure rooted at `root`; returns the nodes of the last level and the depth.
std::pair<std::vector<int>, int> last_level(const Adjacency& adj, int root, std::vector<int>& mark,
                                            int stamp) {
  std::vector<int> current{root};
  mark[static_cast<std::size_t>(root)] = stamp;
  int depth = 0;
  while (true) {
    std::vector<int> next;
    for (int v : current) {
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (mark[static_cast<std::size_t>(w)] != stamp) {
          mark[static_cast<std::size_t>(w)] = stamp;
          next.push_back(w);
        }
      }
    }
    if (next.empty()) return {current, depth};
    current = std::move(next);
    ++depth;
  }
}

}  // namespace

std::vector<int> reverse_cuthill_mckee(const SparseSymMatrix& a) {
  const auto n = static_cast<std::size_t>(a.dimension());
  const Adjacency adj = build_adjacency(a);
  auto degree = [&](int v) { return adj[static_cast<std::size_t>(v)].size(); };
  auto by_degree = [&](int l, int r) { return degree(l) != degree(r) ? degree(l) < degree(r) : l < r; };

  std::vector<int> order;
  order.reserve(n);
  std::vector<char> placed(n, 0);
  std::vector<int> mark(n, -1);
  int stamp = 0;

  for (std::size_t seed = 0; seed < n; ++seed) {
    if (placed[seed]) continue;
    // Start from the minimum-degree node of this component.
    int root = static_cast<int>(seed);
    {
      std::vector<int> queue{root};
      std::vector<char> seen(n, 0);
      seen[seed] = 1;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        for (int w : adj[static_cast<std::size_t>(queue[q])]) {
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            queue.push_back(w);
          }
        }
      }
      root = *std::min_element(queue.begin(), queue.end(), by_degree);
    }
    // George-Liu pseudo-peripheral node search.
    auto [level, depth] = last_level(adj, root, mark, stamp++);
    while (true) {
      const int candidate = *std::min_element(level.begin(), level.end(), by_degree);
      auto [next_level, next_depth] = last_level(adj, candidate, mark, stamp++);
      if (next_depth <= depth) break;
      root = candidate;
      level = std::move(next_level);
      depth = next_depth;
    }

    const std::size_t begin = order.size();
    order.push_back(root);
    placed[static_cast<std::size_t>(root)] = 1;
    for (std::size_t q = begin; q < order.size(); ++q) {
      std::vector<int> fresh;
      for (int w : adj[static_cast<std::size_t>(order[q])]) {
        if (!placed[static_cast<std::size_t>(w)]) {
          placed[static_cast<std::size_t>(w)] = 1;
          fresh.push_back(w);
        }
      }
      std::sort(fresh.begin(), fresh.end(), by_degree);
      order.insert(order.end(), fresh.begin(), fresh.end());
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

EnvelopeCholesky::EnvelopeCholesky(const SparseSymMatrix& a)
    : EnvelopeCholesky(a, reverse_cuthill_mckee(a)) {}

EnvelopeCholesky::EnvelopeCholesky(const SparseSymMatrix& a, std::vector<int> ordering)
    : ordering_(std::move(ordering)) {
  if (ordering_.size() != static_cast<std::size_t>(a.dimension())) {
    throw MatrixError("ordering size does not match matrix dimension");
  }
  factor(a);
}

void EnvelopeCholesky::factor(const SparseSymMatrix& a) {
  const auto n = static_cast<std::size_t>(a.dimension());
  std::vector<int> position(n, -1);
  for (std::size_t p = 0; p < n; ++p) {
    const int original = ordering_[p];
    if (original < 0 || static_cast<std::size_t>(original) >= n || position[static_cast<std::size_t>(original)] >= 0) {
      throw MatrixError("ordering is not a permutation");
    }
    position[static_cast<std::size_t>(original)] = static_cast<int>(p);
  }

  const auto offsets = a.row_offsets();
  const auto cols = a.columns();
  const auto vals = a.values();

  first_.resize(n);
  for (std::size_t p = 0; p < n; ++p) first_[p] = static_cast<int>(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (int e = offsets[i]; e < offsets[i + 1]; ++e) {
      const int pi = position[i];
      const int pj = position[static_cast<std::size_t>(cols[static_cast<std::size_t>(e)])];
      const int row = std::max(pi, pj);
      first_[static_cast<std::size_t>(row)] = std::min(first_[static_cast<std::size_t>(row)], std::min(pi, pj));
    }
  }
  row_start_.resize(n + 1);
  row_start_[0] = 0;
  bandwidth_ = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const auto extent = p - static_cast<std::size_t>(first_[p]);
    bandwidth_ = std::max(bandwidth_, static_cast<int>(extent));
    row_start_[p + 1] = row_start_[p] + extent + 1;
  }
  factor_.assign(row_start_[n], 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int e = offsets[i]; e < offsets[i + 1]; ++e) {
      const int pi = position[i];
      const int pj = position[static_cast<std::size_t>(cols[static_cast<std::size_t>(e)])];
      const auto row = static_cast<std::size_t>(std::max(pi, pj));
      const auto col = static_cast<std::size_t>(std::min(pi, pj));
      factor_[row_start_[row] + (col - static_cast<std::size_t>(first_[row]))] += vals[static_cast<std::size_t>(e)];
    }
  }

  const simd::KernelTable& k = simd::active_kernels();
  for (std::size_t i = 0; i < n; ++i) {
    const auto fi = static_cast<std::size_t>(first_[i]);
    double* row_i = factor_.data() + row_start_[i];  // row_i[c - fi] = L(i, c)
    for (std::size_t j = fi; j < i; ++j) {
      const auto fj = static_cast<std::size_t>(first_[j]);
      const double* row_j = factor_.data() + row_start_[j];
      const std::size_t s = std::max(fi, fj);
      const double overlap = k.dot(row_i + (s - fi), row_j + (s - fj), j - s);
      row_i[j - fi] = (row_i[j - fi] - overlap) / row_j[j - fj];
    }
    const double pivot = row_i[i - fi] - k.dot(row_i, row_i, i - fi);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw MatrixError("Cholesky breakdown: non-positive pivot at row " +
                        std::to_string(ordering_[i]));
    }
    row_i[i - fi] = std::sqrt(pivot);
  }
}

void EnvelopeCholesky::solve_in_place(std::span<double> b) const {
  const std::size_t n = ordering_.size();
  if (b.size() != n) throw MatrixError("solve: size mismatch");
  std::vector<double> y(n);
  for (std::size_t p = 0; p < n; ++p) y[p] = b[static_cast<std::size_t>(ordering_[p])];

  const simd::KernelTable& k = simd::active_kernels();
  for (std::size_t i = 0; i < n; ++i) {
    const auto fi = static_cast<std::size_t>(first_[i]);
    const double* row_i = factor_.data() + row_start_[i];
    y[i] = (y[i] - k.dot(row_i, y.data() + fi, i - fi)) / row_i[i - fi];
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto fi = static_cast<std::size_t>(first_[i]);
    const double* row_i = factor_.data() + row_start_[i];
    y[i] /= row_i[i - fi];
    k.axpy(-y[i], row_i, y.data() + fi, i - fi);
  }
  for (std::size_t p = 0; p < n; ++p) b[static_cast<std::size_t>(ordering_[p])] = y[p];
}

std::vector<double> EnvelopeCholesky::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

}  // namespace annulus
