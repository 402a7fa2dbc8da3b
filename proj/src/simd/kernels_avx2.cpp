// Compiled with -mavx2 -mfma. Only reached after a CPUID check in dispatch.cpp.

#include <immintrin.h>

#include "annulus/simd/kernels.hpp"

namespace annulus::simd::detail {
namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d low = _mm256_castpd256_pd128(v);
  const __m128d high = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(low, high);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double sum = horizontal_sum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d scale = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(scale, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(scale, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(scale, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double gather_dot_avx2(const double* values, const int* columns, const double* x,
                       std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(columns + i));
    const __m256d gathered = _mm256_i32gather_pd(x, idx, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(values + i), gathered, acc);
  }
  double sum = horizontal_sum(acc);
  for (; i < n; ++i) sum += values[i] * x[columns[i]];
  return sum;
}

void p1_stiffness_avx2(const TriangleBatch& in, const StiffnessBatch& out) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t t = 0;
  for (; t + 4 <= in.count; t += 4) {
    const __m256d x0 = _mm256_loadu_pd(in.x0 + t);
    const __m256d y0 = _mm256_loadu_pd(in.y0 + t);
    const __m256d x1 = _mm256_loadu_pd(in.x1 + t);
    const __m256d y1 = _mm256_loadu_pd(in.y1 + t);
    const __m256d x2 = _mm256_loadu_pd(in.x2 + t);
    const __m256d y2 = _mm256_loadu_pd(in.y2 + t);
    const __m256d b0 = _mm256_sub_pd(y1, y2);
    const __m256d b1 = _mm256_sub_pd(y2, y0);
    const __m256d b2 = _mm256_sub_pd(y0, y1);
    const __m256d c0 = _mm256_sub_pd(x2, x1);
    const __m256d c1 = _mm256_sub_pd(x0, x2);
    const __m256d c2 = _mm256_sub_pd(x1, x0);
    const __m256d area2 = _mm256_fmsub_pd(c2, b1, _mm256_mul_pd(c1, b2));
    const __m256d scale = _mm256_div_pd(half, area2);  // 1 / (2 area2)
    _mm256_storeu_pd(out.area + t, _mm256_mul_pd(half, area2));
    auto entry = [&](__m256d bi, __m256d ci, __m256d bj, __m256d cj) {
      return _mm256_mul_pd(_mm256_fmadd_pd(bi, bj, _mm256_mul_pd(ci, cj)), scale);
    };
    _mm256_storeu_pd(out.k00 + t, entry(b0, c0, b0, c0));
    _mm256_storeu_pd(out.k01 + t, entry(b0, c0, b1, c1));
    _mm256_storeu_pd(out.k02 + t, entry(b0, c0, b2, c2));
    _mm256_storeu_pd(out.k11 + t, entry(b1, c1, b1, c1));
    _mm256_storeu_pd(out.k12 + t, entry(b1, c1, b2, c2));
    _mm256_storeu_pd(out.k22 + t, entry(b2, c2, b2, c2));
  }
  if (t < in.count) {
    const TriangleBatch tail{in.x0 + t, in.y0 + t, in.x1 + t, in.y1 + t,
                             in.x2 + t, in.y2 + t, in.count - t};
    const StiffnessBatch tail_out{out.area + t, out.k00 + t, out.k01 + t, out.k02 + t,
                                  out.k11 + t, out.k12 + t, out.k22 + t};
    scalar_table.p1_stiffness(tail, tail_out);
  }
}

}  // namespace

const KernelTable avx2_table{Isa::avx2, dot_avx2, axpy_avx2, gather_dot_avx2, p1_stiffness_avx2};

}  // namespace annulus::simd::detail
