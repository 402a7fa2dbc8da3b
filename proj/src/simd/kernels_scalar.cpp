#include "annulus/simd/kernels.hpp"

namespace annulus::simd::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double gather_dot_scalar(const double* values, const int* columns, const double* x,
                         std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += values[i] * x[columns[i]];
  return sum;
}

void p1_stiffness_scalar(const TriangleBatch& in, const StiffnessBatch& out) {
  for (std::size_t t = 0; t < in.count; ++t) {
    const double b0 = in.y1[t] - in.y2[t];
    const double b1 = in.y2[t] - in.y0[t];
    const double b2 = in.y0[t] - in.y1[t];
    const double c0 = in.x2[t] - in.x1[t];
    const double c1 = in.x0[t] - in.x2[t];
    const double c2 = in.x1[t] - in.x0[t];
    const double area2 = c2 * b1 - c1 * b2;  // (x1-x0)(y2-y0) - (x2-x0)(y1-y0)
    const double scale = 1.0 / (2.0 * area2);
    out.area[t] = 0.5 * area2;
    out.k00[t] = (b0 * b0 + c0 * c0) * scale;
    out.k01[t] = (b0 * b1 + c0 * c1) * scale;
    out.k02[t] = (b0 * b2 + c0 * c2) * scale;
    out.k11[t] = (b1 * b1 + c1 * c1) * scale;
    out.k12[t] = (b1 * b2 + c1 * c2) * scale;
    out.k22[t] = (b2 * b2 + c2 * c2) * scale;
  }
}

}  // namespace

const KernelTable scalar_table{Isa::scalar, dot_scalar, axpy_scalar, gather_dot_scalar,
                               p1_stiffness_scalar};

}  // namespace annulus::simd::detail
