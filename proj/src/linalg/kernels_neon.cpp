#include <arm_neon.h>

#include "kernel_tables.hpp"

namespace netcascade::kernels::detail {
namespace {

// One float64x2_t holds one complex value [re, im].
// alpha * x = ar * x + [-ai, ai] * swap(x).

inline float64x2_t swap_parts(float64x2_t v) { return vextq_f64(v, v, 1); }

inline float64x2_t signed_imag(cplx alpha) {
  const double v[2] = {-alpha.imag(), alpha.imag()};
  return vld1q_f64(v);
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const float64x2_t ar = vdupq_n_f64(alpha.real());
  const float64x2_t ai = signed_imag(alpha);
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(xs + 2 * i);
    float64x2_t acc = vld1q_f64(ys + 2 * i);
    acc = vfmaq_f64(acc, ar, v);
    acc = vfmaq_f64(acc, ai, swap_parts(v));
    vst1q_f64(ys + 2 * i, acc);
  }
}

void axpy4(std::size_t n, const cplx* alpha, const cplx* x0, const cplx* x1, const cplx* x2,
           const cplx* x3, cplx* y) {
  const double* xs[4] = {reinterpret_cast<const double*>(x0), reinterpret_cast<const double*>(x1),
                         reinterpret_cast<const double*>(x2), reinterpret_cast<const double*>(x3)};
  float64x2_t ar[4], ai[4];
  for (int k = 0; k < 4; ++k) {
    ar[k] = vdupq_n_f64(alpha[k].real());
    ai[k] = signed_imag(alpha[k]);
  }
  double* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t acc = vld1q_f64(ys + 2 * i);
    for (int k = 0; k < 4; ++k) {
      const float64x2_t v = vld1q_f64(xs[k] + 2 * i);
      acc = vfmaq_f64(acc, ar[k], v);
      acc = vfmaq_f64(acc, ai[k], swap_parts(v));
    }
    vst1q_f64(ys + 2 * i, acc);
  }
}

void scal(std::size_t n, cplx alpha, cplx* x) {
  const float64x2_t ar = vdupq_n_f64(alpha.real());
  const float64x2_t ai = signed_imag(alpha);
  double* xs = reinterpret_cast<double*>(x);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(xs + 2 * i);
    vst1q_f64(xs + 2 * i, vfmaq_f64(vmulq_f64(ar, v), ai, swap_parts(v)));
  }
}

double sum_abs2(std::size_t n, const cplx* x) {
  const double* xs = reinterpret_cast<const double*>(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t v = vld1q_f64(xs + 2 * i);
    acc = vfmaq_f64(acc, v, v);
  }
  return vaddvq_f64(acc);
}

void gemm_panel(std::size_t m, std::size_t n, std::size_t k, const cplx* a, std::size_t lda, const cplx* bp,
                cplx* c, std::size_t ldc) {
  const double* bs = reinterpret_cast<const double*>(bp);
  const double sign_v[2] = {-1.0, 1.0};
  const float64x2_t sign = vld1q_f64(sign_v);
  for (std::size_t i = 0; i < m; ++i) {
    const double* as = reinterpret_cast<const double*>(a + i * lda);
    float64x2_t acc[kPanelWidth];
    for (auto& v : acc) v = vdupq_n_f64(0.0);
    for (std::size_t p = 0; p < k; ++p) {
      const float64x2_t av = vld1q_f64(as + 2 * p);
      const float64x2_t ar = vdupq_laneq_f64(av, 0);
      const float64x2_t ai = vmulq_f64(vdupq_laneq_f64(av, 1), sign);
      for (std::size_t j = 0; j < kPanelWidth; ++j) {
        const float64x2_t b = vld1q_f64(bs + 2 * (kPanelWidth * p + j));
        acc[j] = vfmaq_f64(acc[j], ar, b);
        acc[j] = vfmaq_f64(acc[j], ai, swap_parts(b));
      }
    }
    double* cs = reinterpret_cast<double*>(c + i * ldc);
    for (std::size_t j = 0; j < n; ++j) vst1q_f64(cs + 2 * j, vaddq_f64(vld1q_f64(cs + 2 * j), acc[j]));
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{Backend::Neon, &axpy, &axpy4, &scal, &sum_abs2, &gemm_panel};
  return t;
}

}  // namespace netcascade::kernels::detail
