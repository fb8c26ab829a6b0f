#include <gtest/gtest.h>

#include "netcascade/error.hpp"
#include "netcascade/linalg/kernels.hpp"
#include "netcascade/linalg/lu.hpp"
#include "test_support.hpp"

using namespace netcascade;
using namespace nc_test;

namespace {

std::vector<cplx> random_vec(Rng& rng, Index n) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = rng.complex_normal();
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

class BackendRestore {
 public:
  BackendRestore() : saved_(kernels::active_backend()) {}
  ~BackendRestore() { kernels::set_backend(saved_); }

 private:
  kernels::Backend saved_;
};

}  // namespace

TEST(KernelDispatch, ScalarAlwaysAvailable) {
  EXPECT_TRUE(kernels::is_available(kernels::Backend::Scalar));
  const auto all = kernels::available_backends();
  EXPECT_FALSE(all.empty());
  EXPECT_EQ(all.front(), kernels::Backend::Scalar);
  EXPECT_EQ(kernels::name(kernels::Backend::Avx2), "avx2");
  for (auto b : {kernels::Backend::Avx2, kernels::Backend::Neon}) {
    if (!kernels::is_available(b)) EXPECT_THROW((void)kernels::table(b), Error);
  }
}

TEST(KernelDispatch, SetBackendSwitchesActiveTable) {
  BackendRestore restore;
  for (auto b : kernels::available_backends()) {
    kernels::set_backend(b);
    EXPECT_EQ(kernels::active_backend(), b);
    EXPECT_EQ(kernels::active().backend, b);
  }
}

// Every vector backend must reproduce the scalar reference up to rounding.
class KernelEquivalence : public ::testing::TestWithParam<kernels::Backend> {};

TEST_P(KernelEquivalence, LevelOneKernels) {
  const auto& ref = kernels::table(kernels::Backend::Scalar);
  const auto& vec = kernels::table(GetParam());
  Rng rng(21);
  for (Index n = 0; n < 40; ++n) {
    const auto x = random_vec(rng, n), x1 = random_vec(rng, n), x2 = random_vec(rng, n), x3 = random_vec(rng, n);
    const auto y0 = random_vec(rng, n);
    const cplx alpha = rng.complex_normal();
    const cplx alphas[4] = {rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};

    auto ya = y0, yb = y0;
    ref.axpy(n, alpha, x.data(), ya.data());
    vec.axpy(n, alpha, x.data(), yb.data());
    EXPECT_LT(max_diff(ya, yb), 1e-14) << "axpy n=" << n;

    ya = y0;
    yb = y0;
    ref.axpy4(n, alphas, x.data(), x1.data(), x2.data(), x3.data(), ya.data());
    vec.axpy4(n, alphas, x.data(), x1.data(), x2.data(), x3.data(), yb.data());
    EXPECT_LT(max_diff(ya, yb), 1e-13) << "axpy4 n=" << n;

    ya = y0;
    yb = y0;
    ref.scal(n, alpha, ya.data());
    vec.scal(n, alpha, yb.data());
    EXPECT_LT(max_diff(ya, yb), 1e-14) << "scal n=" << n;

    const double sa = ref.sum_abs2(n, x.data()), sb = vec.sum_abs2(n, x.data());
    EXPECT_NEAR(sa, sb, 1e-13 * std::max(1.0, sa)) << "sum_abs2 n=" << n;
  }
}

TEST_P(KernelEquivalence, GemmPanel) {
  const auto& ref = kernels::table(kernels::Backend::Scalar);
  const auto& vec = kernels::table(GetParam());
  constexpr Index w = kernels::kPanelWidth;
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = uniform_index(rng, 1, 9), n = uniform_index(rng, 1, w), k = uniform_index(rng, 0, 70);
    const Index lda = k + uniform_index(rng, 0, 3), ldc = n + uniform_index(rng, 0, 3);
    const auto a = random_vec(rng, m * lda);
    auto bp = random_vec(rng, k * w);
    for (Index p = 0; p < k; ++p)
      for (Index j = n; j < w; ++j) bp[p * w + j] = 0.0;
    const auto c0 = random_vec(rng, m * ldc);
    auto ca = c0, cb = c0;
    ref.gemm_panel(m, n, k, a.data(), lda, bp.data(), ca.data(), ldc);
    vec.gemm_panel(m, n, k, a.data(), lda, bp.data(), cb.data(), ldc);
    EXPECT_LT(max_diff(ca, cb), 1e-12) << m << "x" << n << "x" << k;
    // Padding columns of c beyond n stay untouched.
    for (Index i = 0; i < m; ++i)
      for (Index j = n; j < ldc; ++j) EXPECT_EQ(cb[i * ldc + j], c0[i * ldc + j]);
  }
}

TEST_P(KernelEquivalence, GemmAndLuAgreeAcrossBackends) {
  BackendRestore restore;
  Rng rng(23);
  const ComplexMatrix a = random_matrix(rng, 130, 130), b = random_matrix(rng, 130, 17);
  kernels::set_backend(kernels::Backend::Scalar);
  const ComplexMatrix p_ref = a * b, x_ref = solve_linear(a, b);
  kernels::set_backend(GetParam());
  EXPECT_LT(rel(a * b, p_ref), 1e-14);
  EXPECT_LT(rel(solve_linear(a, b), x_ref), 1e-11);
}

INSTANTIATE_TEST_SUITE_P(Available, KernelEquivalence, ::testing::ValuesIn(kernels::available_backends()),
                         [](const auto& info) { return std::string(kernels::name(info.param)); });
