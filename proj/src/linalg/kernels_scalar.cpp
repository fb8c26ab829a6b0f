#include "kernel_tables.hpp"

namespace netcascade::kernels::detail {
namespace {

// Written on re/im parts directly: std::complex multiplication carries the
// C99 inf/nan recovery branch, which blocks vectorization and is not wanted here.

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const double ar = alpha.real(), ai = alpha.imag();
  const double* xs = reinterpret_cast<const double*>(x);
  double* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] += ar * xr - ai * xi;
    ys[2 * i + 1] += ar * xi + ai * xr;
  }
}

void axpy4(std::size_t n, const cplx* alpha, const cplx* x0, const cplx* x1, const cplx* x2,
           const cplx* x3, cplx* y) {
  const double* xs[4] = {reinterpret_cast<const double*>(x0), reinterpret_cast<const double*>(x1),
                         reinterpret_cast<const double*>(x2), reinterpret_cast<const double*>(x3)};
  double ar[4], ai[4];
  for (int k = 0; k < 4; ++k) {
    ar[k] = alpha[k].real();
    ai[k] = alpha[k].imag();
  }
  double* ys = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    double re = 0.0, im = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double xr = xs[k][2 * i], xi = xs[k][2 * i + 1];
      re += ar[k] * xr - ai[k] * xi;
      im += ar[k] * xi + ai[k] * xr;
    }
    ys[2 * i] += re;
    ys[2 * i + 1] += im;
  }
}

void scal(std::size_t n, cplx alpha, cplx* x) {
  const double ar = alpha.real(), ai = alpha.imag();
  double* xs = reinterpret_cast<double*>(x);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    xs[2 * i] = ar * xr - ai * xi;
    xs[2 * i + 1] = ar * xi + ai * xr;
  }
}

double sum_abs2(std::size_t n, const cplx* x) {
  const double* xs = reinterpret_cast<const double*>(x);
  double s = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) s += xs[i] * xs[i];
  return s;
}

void gemm_panel(std::size_t m, std::size_t n, std::size_t k, const cplx* a, std::size_t lda, const cplx* bp,
                cplx* c, std::size_t ldc) {
  const double* bs = reinterpret_cast<const double*>(bp);
  for (std::size_t i = 0; i < m; ++i) {
    const double* as = reinterpret_cast<const double*>(a + i * lda);
    double re[kPanelWidth] = {}, im[kPanelWidth] = {};
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = as[2 * p], ai = as[2 * p + 1];
      const double* b = bs + 2 * kPanelWidth * p;
      for (std::size_t j = 0; j < kPanelWidth; ++j) {
        re[j] += ar * b[2 * j] - ai * b[2 * j + 1];
        im[j] += ar * b[2 * j + 1] + ai * b[2 * j];
      }
    }
    double* cs = reinterpret_cast<double*>(c + i * ldc);
    for (std::size_t j = 0; j < n; ++j) {
      cs[2 * j] += re[j];
      cs[2 * j + 1] += im[j];
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Backend::Scalar, &axpy, &axpy4, &scal, &sum_abs2, &gemm_panel};
  return t;
}

}  // namespace netcascade::kernels::detail
