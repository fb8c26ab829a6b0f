#include <algorithm>
#include <vector>

#include "netcascade/error.hpp"
#include "netcascade/linalg/kernels.hpp"
#include "netcascade/linalg/matrix.hpp"

namespace netcascade {

namespace {

constexpr Index kDepthTile = 256;
constexpr Index kWidthTile = 512;
constexpr Index kRowTile = 64;

// Row-oriented path: skips zero entries of A, so block-sparse operands
// (supersystem blocks, permutations) cost only their nonzeros.
void gemm_sparse_tile(const kernels::KernelTable& k, cplx alpha, ConstMatrixView a, ConstMatrixView b, MatrixView c,
                      Index kk, Index kc) {
  std::vector<cplx> coef(kc);
  std::vector<const cplx*> src(kc);
  for (Index jj = 0; jj < c.cols; jj += kWidthTile) {
    const Index nc = std::min(kWidthTile, c.cols - jj);
    for (Index i = 0; i < a.rows; ++i) {
      const cplx* arow = a.row(i) + kk;
      Index cnt = 0;
      for (Index t = 0; t < kc; ++t) {
        if (arow[t] != cplx(0.0)) {
          coef[cnt] = alpha * arow[t];
          src[cnt] = b.row(kk + t) + jj;
          ++cnt;
        }
      }
      cplx* crow = c.row(i) + jj;
      Index t = 0;
      for (; t + 4 <= cnt; t += 4) k.axpy4(nc, &coef[t], src[t], src[t + 1], src[t + 2], src[t + 3], crow);
      for (; t < cnt; ++t) k.axpy(nc, coef[t], src[t], crow);
    }
  }
}

void gemm_dense_tile(const kernels::KernelTable& k, cplx alpha, ConstMatrixView a, ConstMatrixView b, MatrixView c,
                     Index kk, Index kc, std::vector<cplx>& pack) {
  constexpr Index w = kernels::kPanelWidth;
  for (Index jj = 0; jj < c.cols; jj += kWidthTile) {
    const Index nc = std::min(kWidthTile, c.cols - jj);
    const Index panels = (nc + w - 1) / w;
    pack.assign(panels * kc * w, cplx(0.0));
    for (Index p = 0; p < kc; ++p) {
      const cplx* brow = b.row(kk + p) + jj;
      for (Index j = 0; j < nc; ++j) pack[(j / w) * kc * w + p * w + j % w] = alpha * brow[j];
    }
    for (Index ib = 0; ib < a.rows; ib += kRowTile) {
      const Index mr = std::min(kRowTile, a.rows - ib);
      for (Index q = 0; q < panels; ++q) {
        const Index ncols = std::min(w, nc - q * w);
        k.gemm_panel(mr, ncols, kc, a.row(ib) + kk, a.stride, pack.data() + q * kc * w, c.row(ib) + jj + q * w,
                     c.stride);
      }
    }
  }
}

}  // namespace

void gemm(cplx alpha, ConstMatrixView a, ConstMatrixView b, cplx beta, MatrixView c) {
  if (a.rows != c.rows || a.cols != b.rows || b.cols != c.cols) {
    fail(ErrorCode::InvalidBlock, "gemm shape mismatch");
  }
  const auto& k = kernels::active();
  if (beta == cplx(0.0)) {
    for (Index r = 0; r < c.rows; ++r) std::fill_n(c.row(r), c.cols, cplx(0.0));
  } else if (beta != cplx(1.0)) {
    for (Index r = 0; r < c.rows; ++r) k.scal(c.cols, beta, c.row(r));
  }
  if (alpha == cplx(0.0) || a.cols == 0 || c.cols == 0 || c.rows == 0) return;

  std::vector<cplx> pack;
  for (Index kk = 0; kk < a.cols; kk += kDepthTile) {
    const Index kc = std::min(kDepthTile, a.cols - kk);
    Index zeros = 0;
    for (Index i = 0; i < a.rows; ++i) {
      const cplx* arow = a.row(i) + kk;
      for (Index t = 0; t < kc; ++t) zeros += arow[t] == cplx(0.0);
    }
    if (c.cols < kernels::kPanelWidth || 2 * zeros > a.rows * kc) {
      gemm_sparse_tile(k, alpha, a, b, c, kk, kc);
    } else {
      gemm_dense_tile(k, alpha, a, b, c, kk, kc, pack);
    }
  }
}

}  // namespace netcascade
