#include <immintrin.h>

#include "kernel_tables.hpp"

namespace netcascade::kernels::detail {
namespace {

// One __m256d holds two interleaved complex values [re0, im0, re1, im1].
// alpha * x = addsub(ar * x, ai * swap(x)).

inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xa = _mm256_loadu_pd(xs + 2 * i);
    const __m256d xb = _mm256_loadu_pd(xs + 2 * i + 4);
    const __m256d pa = _mm256_fmaddsub_pd(ar, xa, _mm256_mul_pd(ai, swap_pairs(xa)));
    const __m256d pb = _mm256_fmaddsub_pd(ar, xb, _mm256_mul_pd(ai, swap_pairs(xb)));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), pa));
    _mm256_storeu_pd(ys + 2 * i + 4, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i + 4), pb));
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d xa = _mm256_loadu_pd(xs + 2 * i);
    const __m256d pa = _mm256_fmaddsub_pd(ar, xa, _mm256_mul_pd(ai, swap_pairs(xa)));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), pa));
  }
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] += alpha.real() * xr - alpha.imag() * xi;
    ys[2 * i + 1] += alpha.real() * xi + alpha.imag() * xr;
  }
}

void axpy4(std::size_t n, const cplx* alpha, const cplx* x0, const cplx* x1, const cplx* x2,
           const cplx* x3, cplx* y) {
  const double* xs[4] = {reinterpret_cast<const double*>(x0), reinterpret_cast<const double*>(x1),
                         reinterpret_cast<const double*>(x2), reinterpret_cast<const double*>(x3)};
  __m256d ar[4], ai[4];
  for (int k = 0; k < 4; ++k) {
    ar[k] = _mm256_set1_pd(alpha[k].real());
    ai[k] = _mm256_set1_pd(alpha[k].imag());
  }
  double* ys = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(xs[0] + 2 * i);
    __m256d p = _mm256_mul_pd(ar[0], v);
    __m256d q = _mm256_mul_pd(ai[0], swap_pairs(v));
    for (int k = 1; k < 4; ++k) {
      v = _mm256_loadu_pd(xs[k] + 2 * i);
      p = _mm256_fmadd_pd(ar[k], v, p);
      q = _mm256_fmadd_pd(ai[k], swap_pairs(v), q);
    }
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), _mm256_addsub_pd(p, q)));
  }
  for (; i < n; ++i) {
    double re = 0.0, im = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double xr = xs[k][2 * i], xi = xs[k][2 * i + 1];
      re += alpha[k].real() * xr - alpha[k].imag() * xi;
      im += alpha[k].real() * xi + alpha[k].imag() * xr;
    }
    ys[2 * i] += re;
    ys[2 * i + 1] += im;
  }
}

void scal(std::size_t n, cplx alpha, cplx* x) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  double* xs = reinterpret_cast<double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(xs + 2 * i);
    _mm256_storeu_pd(xs + 2 * i, _mm256_fmaddsub_pd(ar, v, _mm256_mul_pd(ai, swap_pairs(v))));
  }
  for (; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    xs[2 * i] = alpha.real() * xr - alpha.imag() * xi;
    xs[2 * i + 1] = alpha.real() * xi + alpha.imag() * xr;
  }
}

double sum_abs2(std::size_t n, const cplx* x) {
  const double* xs = reinterpret_cast<const double*>(x);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(xs + 2 * i);
    const __m256d b = _mm256_loadu_pd(xs + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t j = 2 * i; j < 2 * n; ++j) s += xs[j] * xs[j];
  return s;
}

// Adds addsub(p, q) (two complex values) to c[0..n), n <= 2.
inline void add_pair(double* c, __m256d p, __m256d q, std::size_t n) {
  const __m256d r = _mm256_addsub_pd(p, q);
  if (n >= 2) {
    _mm256_storeu_pd(c, _mm256_add_pd(_mm256_loadu_pd(c), r));
  } else if (n == 1) {
    _mm_storeu_pd(c, _mm_add_pd(_mm_loadu_pd(c), _mm256_castpd256_pd128(r)));
  }
}

// Two rows by four columns per step; real and imaginary broadcasts are
// accumulated separately and combined once with addsub.
void gemm_panel(std::size_t m, std::size_t n, std::size_t k, const cplx* a, std::size_t lda, const cplx* bp,
                cplx* c, std::size_t ldc) {
  const double* bs = reinterpret_cast<const double*>(bp);
  const std::size_t n_hi = n > 2 ? n - 2 : 0, n_lo = n > 2 ? 2 : n;
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    const double* a0 = reinterpret_cast<const double*>(a + i * lda);
    const double* a1 = reinterpret_cast<const double*>(a + (i + 1) * lda);
    __m256d p00 = _mm256_setzero_pd(), p01 = _mm256_setzero_pd(), q00 = _mm256_setzero_pd(), q01 = _mm256_setzero_pd();
    __m256d p10 = _mm256_setzero_pd(), p11 = _mm256_setzero_pd(), q10 = _mm256_setzero_pd(), q11 = _mm256_setzero_pd();
    for (std::size_t p = 0; p < k; ++p) {
      const __m256d b0 = _mm256_loadu_pd(bs + 8 * p);
      const __m256d b1 = _mm256_loadu_pd(bs + 8 * p + 4);
      const __m256d s0 = swap_pairs(b0), s1 = swap_pairs(b1);
      __m256d r = _mm256_broadcast_sd(a0 + 2 * p), im = _mm256_broadcast_sd(a0 + 2 * p + 1);
      p00 = _mm256_fmadd_pd(r, b0, p00);
      p01 = _mm256_fmadd_pd(r, b1, p01);
      q00 = _mm256_fmadd_pd(im, s0, q00);
      q01 = _mm256_fmadd_pd(im, s1, q01);
      r = _mm256_broadcast_sd(a1 + 2 * p);
      im = _mm256_broadcast_sd(a1 + 2 * p + 1);
      p10 = _mm256_fmadd_pd(r, b0, p10);
      p11 = _mm256_fmadd_pd(r, b1, p11);
      q10 = _mm256_fmadd_pd(im, s0, q10);
      q11 = _mm256_fmadd_pd(im, s1, q11);
    }
    double* c0 = reinterpret_cast<double*>(c + i * ldc);
    double* c1 = reinterpret_cast<double*>(c + (i + 1) * ldc);
    add_pair(c0, p00, q00, n_lo);
    add_pair(c0 + 4, p01, q01, n_hi);
    add_pair(c1, p10, q10, n_lo);
    add_pair(c1 + 4, p11, q11, n_hi);
  }
  for (; i < m; ++i) {
    const double* a0 = reinterpret_cast<const double*>(a + i * lda);
    __m256d p00 = _mm256_setzero_pd(), p01 = _mm256_setzero_pd(), q00 = _mm256_setzero_pd(), q01 = _mm256_setzero_pd();
    for (std::size_t p = 0; p < k; ++p) {
      const __m256d b0 = _mm256_loadu_pd(bs + 8 * p);
      const __m256d b1 = _mm256_loadu_pd(bs + 8 * p + 4);
      const __m256d r = _mm256_broadcast_sd(a0 + 2 * p), im = _mm256_broadcast_sd(a0 + 2 * p + 1);
      p00 = _mm256_fmadd_pd(r, b0, p00);
      p01 = _mm256_fmadd_pd(r, b1, p01);
      q00 = _mm256_fmadd_pd(im, swap_pairs(b0), q00);
      q01 = _mm256_fmadd_pd(im, swap_pairs(b1), q01);
    }
    double* c0 = reinterpret_cast<double*>(c + i * ldc);
    add_pair(c0, p00, q00, n_lo);
    add_pair(c0 + 4, p01, q01, n_hi);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Backend::Avx2, &axpy, &axpy4, &scal, &sum_abs2, &gemm_panel};
  return t;
}

}  // namespace netcascade::kernels::detail
