#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2+FMA variant.
// The variant is picked once at startup from CPUID; set_active_isa() lets tests
// pin a specific one. Results of the two variants agree to rounding, not bitwise.

#include <cstddef>
#include <span>

namespace annulus::simd {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

/// Compiled in and supported by the running CPU.
bool isa_supported(Isa isa);
Isa best_isa();
Isa active_isa();
/// Throws std::invalid_argument if `isa` is not supported here.
void set_active_isa(Isa isa);

/// Structure-of-arrays triangle vertex coordinates.
struct TriangleBatch {
  const double* x0;
  const double* y0;
  const double* x1;
  const double* y1;
  const double* x2;
  const double* y2;
  std::size_t count;
};

/// Signed area and the six distinct P1 stiffness entries per triangle.
struct StiffnessBatch {
  double* area;
  double* k00;
  double* k01;
  double* k02;
  double* k11;
  double* k12;
  double* k22;
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i values[i] * x[columns[i]]
  double (*gather_dot)(const double* values, const int* columns, const double* x,
                       std::size_t n);
  void (*p1_stiffness)(const TriangleBatch& in, const StiffnessBatch& out);
};

const KernelTable& kernels(Isa isa);
const KernelTable& active_kernels();

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double gather_dot(std::span<const double> values, std::span<const int> columns,
                  std::span<const double> x);

namespace detail {
extern const KernelTable scalar_table;
#if defined(ANNULUS_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace annulus::simd
