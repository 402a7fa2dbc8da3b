#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "annulus/fem.hpp"
#include "annulus/simd/kernels.hpp"

using namespace annulus;
using simd::Isa;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

class IsaGuard {
 public:
  IsaGuard() : saved_(simd::active_isa()) {}
  ~IsaGuard() { simd::set_active_isa(saved_); }

 private:
  Isa saved_;
};

}  // namespace

TEST(Simd, ScalarAlwaysAvailable) {
  EXPECT_TRUE(simd::isa_supported(Isa::scalar));
  EXPECT_EQ(simd::kernels(Isa::scalar).isa, Isa::scalar);
  EXPECT_TRUE(simd::isa_supported(simd::best_isa()));
}

TEST(Simd, SetActiveIsa) {
  IsaGuard guard;
  simd::set_active_isa(Isa::scalar);
  EXPECT_EQ(simd::active_isa(), Isa::scalar);
  EXPECT_EQ(simd::active_kernels().isa, Isa::scalar);
  if (!simd::isa_supported(Isa::avx2)) {
    EXPECT_THROW(simd::set_active_isa(Isa::avx2), std::invalid_argument);
  }
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!simd::isa_supported(Isa::avx2)) GTEST_SKIP() << "AVX2 not available";
    vec_ = &simd::kernels(Isa::avx2);
  }
  const simd::KernelTable& ref = simd::kernels(Isa::scalar);
  const simd::KernelTable* vec_ = nullptr;
};

TEST_F(KernelEquivalence, Dot) {
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n < 70; ++n) {
    const auto a = random_vector(n, rng), b = random_vector(n, rng);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::fabs(a[i] * b[i]);
    EXPECT_NEAR(vec_->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), 4e-16 * (scale + 1)) << n;
  }
}

TEST_F(KernelEquivalence, Axpy) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 0; n < 40; ++n) {
    const auto x = random_vector(n, rng);
    auto y1 = random_vector(n, rng);
    auto y2 = y1;
    ref.axpy(0.37, x.data(), y1.data(), n);
    vec_->axpy(0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);
  }
}

TEST_F(KernelEquivalence, GatherDot) {
  std::mt19937_64 rng(13);
  const auto x = random_vector(500, rng);
  std::uniform_int_distribution<int> col(0, 499);
  for (std::size_t n = 0; n < 40; ++n) {
    const auto vals = random_vector(n, rng);
    std::vector<int> cols(n);
    for (int& c : cols) c = col(rng);
    EXPECT_NEAR(vec_->gather_dot(vals.data(), cols.data(), x.data(), n),
                ref.gather_dot(vals.data(), cols.data(), x.data(), n), 1e-14);
  }
}

TEST_F(KernelEquivalence, P1Stiffness) {
  std::mt19937_64 rng(17);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u}) {
    std::vector<double> c[6];
    for (auto& v : c) v = random_vector(n, rng);
    const simd::TriangleBatch in{c[0].data(), c[1].data(), c[2].data(), c[3].data(), c[4].data(), c[5].data(), n};
    std::vector<double> r1(7 * n), r2(7 * n);
    auto batch = [n](std::vector<double>& r) {
      return simd::StiffnessBatch{r.data(), r.data() + n, r.data() + 2 * n, r.data() + 3 * n,
                                  r.data() + 4 * n, r.data() + 5 * n, r.data() + 6 * n};
    };
    ref.p1_stiffness(in, batch(r1));
    vec_->p1_stiffness(in, batch(r2));
    for (std::size_t i = 0; i < 7 * n; ++i) {
      EXPECT_NEAR(r1[i], r2[i], 1e-11 * (1 + std::fabs(r1[i]))) << n << " " << i;
    }
  }
}

TEST_F(KernelEquivalence, EigenvalueIndependentOfIsa) {
  IsaGuard guard;
  const AnnulusSpec spec(0.3, 0.3);
  simd::set_active_isa(Isa::scalar);
  const double scalar = solve_lambda(spec, {16, 64}).eig.lambda;
  simd::set_active_isa(Isa::avx2);
  const double avx2 = solve_lambda(spec, {16, 64}).eig.lambda;
  EXPECT_NEAR(scalar, avx2, 1e-9 * scalar);
}

TEST(Simd, SpanWrappers) {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  EXPECT_DOUBLE_EQ(simd::dot(a, b), 32.0);
  std::vector<double> y{1, 1, 1};
  simd::axpy(2.0, a, y);
  EXPECT_EQ(y, (std::vector<double>{3, 5, 7}));
  const std::vector<int> cols{2, 0};
  const std::vector<double> vals{1.0, 10.0};
  EXPECT_DOUBLE_EQ(simd::gather_dot(vals, cols, b), 6.0 + 40.0);
}
