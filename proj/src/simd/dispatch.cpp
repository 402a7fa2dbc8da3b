#include <atomic>
#include <stdexcept>
#include <string>

#include "annulus/simd/kernels.hpp"

namespace annulus::simd {
namespace {

bool cpu_has_avx2_fma() {
#if defined(ANNULUS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_table;
    case Isa::avx2:
#if defined(ANNULUS_HAVE_AVX2)
      return &detail::avx2_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{table_for(best_isa())};
  return slot;
}

}  // namespace

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool avx2 = cpu_has_avx2_fma();
  return avx2;
}

Isa best_isa() { return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active_slot().load(std::memory_order_acquire)->isa; }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument(std::string("instruction set not available: ") + to_string(isa));
  }
  active_slot().store(table_for(isa), std::memory_order_release);
}

const KernelTable& kernels(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument(std::string("instruction set not available: ") + to_string(isa));
  }
  return *table_for(isa);
}

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  return active_kernels().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

double gather_dot(std::span<const double> values, std::span<const int> columns,
                  std::span<const double> x) {
  if (values.size() != columns.size()) throw std::invalid_argument("gather_dot: size mismatch");
  return active_kernels().gather_dot(values.data(), columns.data(), x.data(), values.size());
}

}  // namespace annulus::simd
