#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "netcascade/linalg/matrix.hpp"

// Inner loops shared by gemm, LU and the triangular solves. A scalar reference
// implementation always exists; vector variants are picked at runtime.
namespace netcascade::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  // y += alpha * x
  void (*axpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
  // y += alpha[0] * x0 + alpha[1] * x1 + alpha[2] * x2 + alpha[3] * x3
  void (*axpy4)(std::size_t n, const cplx* alpha, const cplx* x0, const cplx* x1,
                const cplx* x2, const cplx* x3, cplx* y);
  // x *= alpha
  void (*scal)(std::size_t n, cplx alpha, cplx* x);
  // sum |x_i|^2
  double (*sum_abs2)(std::size_t n, const cplx* x);
  // c[i][j] += sum_p a[i][p] * bp[p][j] for i < m, j < n <= kPanelWidth. a is row-major
  // with stride lda; bp is a packed panel of k rows of kPanelWidth values, zero padded.
  void (*gemm_panel)(std::size_t m, std::size_t n, std::size_t k, const cplx* a, std::size_t lda,
                     const cplx* bp, cplx* c, std::size_t ldc);
};

inline constexpr std::size_t kPanelWidth = 4;

std::string_view name(Backend b);
bool is_available(Backend b);
std::vector<Backend> available_backends();
const KernelTable& table(Backend b);

// Backend in use. Chosen on first call: NETCASCADE_KERNELS=scalar|avx2|neon if
// set and available, otherwise the widest supported one.
const KernelTable& active();
Backend active_backend();
void set_backend(Backend b);

}  // namespace netcascade::kernels
