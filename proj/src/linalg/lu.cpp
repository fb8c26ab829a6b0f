#include "netcascade/linalg/lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "netcascade/error.hpp"
#include "netcascade/linalg/kernels.hpp"

namespace netcascade {

namespace {

constexpr Index kPanel = 64;

[[noreturn]] void singular(double cond, const std::string& where) {
  throw Error(ErrorCode::SingularMatrix, where + " (condition estimate " + std::to_string(cond) + ")", cond);
}

// dst -= sum_t coef[t] * src[t]
void subtract_rows(const kernels::KernelTable& k, Index m, std::vector<cplx>& coef,
                   std::vector<const cplx*>& src, Index count, cplx* dst) {
  Index t = 0;
  for (; t + 4 <= count; t += 4) k.axpy4(m, &coef[t], src[t], src[t + 1], src[t + 2], src[t + 3], dst);
  for (; t < count; ++t) k.axpy(m, coef[t], src[t], dst);
}

}  // namespace

LuFactorization::LuFactorization(ComplexMatrix a) : lu_(std::move(a)) {
  if (!lu_.is_square()) fail(ErrorCode::InvalidBlock, "LU needs a square matrix");
  const Index n = lu_.rows();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), Index{0});
  const auto& k = kernels::active();
  MatrixView A = lu_.view();

  for (Index k0 = 0; k0 < n; k0 += kPanel) {
    const Index k1 = std::min(n, k0 + kPanel);
    for (Index j = k0; j < k1; ++j) {
      Index p = j;
      double best = std::norm(A(j, j));
      for (Index i = j + 1; i < n; ++i) {
        const double v = std::norm(A(i, j));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (best == 0.0) singular(std::numeric_limits<double>::infinity(), "zero pivot in LU");
      if (p != j) {
        std::swap_ranges(A.row(j), A.row(j) + n, A.row(p));
        std::swap(perm_[j], perm_[p]);
      }
      const cplx inv = 1.0 / A(j, j);
      for (Index i = j + 1; i < n; ++i) {
        A(i, j) *= inv;
        const cplx l = A(i, j);
        if (l != cplx(0.0) && j + 1 < k1) k.axpy(k1 - j - 1, -l, A.row(j) + j + 1, A.row(i) + j + 1);
      }
    }
    if (k1 == n) break;
    for (Index j = k0; j < k1; ++j) {
      for (Index i = j + 1; i < k1; ++i) {
        const cplx l = A(i, j);
        if (l != cplx(0.0)) k.axpy(n - k1, -l, A.row(j) + k1, A.row(i) + k1);
      }
    }
    gemm(-1.0, A.block(k1, k0, n - k1, k1 - k0), A.block(k0, k1, k1 - k0, n - k1), 1.0,
         A.block(k1, k1, n - k1, n - k1));
  }

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double v = std::abs(A(i, i));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  condition_ = n == 0 ? 1.0 : hi / lo;
  if (!(condition_ <= kSingularConditionLimit)) singular(condition_, "matrix is singular to working precision");
}

void LuFactorization::solve_in_place(MatrixView b) const {
  const Index n = size();
  if (b.rows != n) fail(ErrorCode::InvalidBlock, "solve: row count mismatch");
  const Index m = b.cols;
  if (n == 0 || m == 0) return;
  const auto& k = kernels::active();
  ConstMatrixView L = lu_.view();

  {
    ComplexMatrix tmp(n, m);
    for (Index i = 0; i < n; ++i) std::copy_n(b.row(perm_[i]), m, tmp.view().row(i));
    copy_into(tmp, b);
  }

  std::vector<cplx> coef(kPanel);
  std::vector<const cplx*> src(kPanel);
  for (Index k0 = 0; k0 < n; k0 += kPanel) {
    const Index k1 = std::min(n, k0 + kPanel);
    for (Index i = k0 + 1; i < k1; ++i) {
      Index cnt = 0;
      for (Index j = k0; j < i; ++j) {
        if (L(i, j) != cplx(0.0)) {
          coef[cnt] = -L(i, j);
          src[cnt++] = b.row(j);
        }
      }
      subtract_rows(k, m, coef, src, cnt, b.row(i));
    }
    if (k1 < n) gemm(-1.0, L.block(k1, k0, n - k1, k1 - k0), b.block(k0, 0, k1 - k0, m), 1.0, b.block(k1, 0, n - k1, m));
  }

  const Index blocks = (n + kPanel - 1) / kPanel;
  for (Index bi = blocks; bi-- > 0;) {
    const Index k0 = bi * kPanel;
    const Index k1 = std::min(n, k0 + kPanel);
    if (k1 < n) gemm(-1.0, L.block(k0, k1, k1 - k0, n - k1), b.block(k1, 0, n - k1, m), 1.0, b.block(k0, 0, k1 - k0, m));
    for (Index i = k1; i-- > k0;) {
      Index cnt = 0;
      for (Index j = i + 1; j < k1; ++j) {
        if (L(i, j) != cplx(0.0)) {
          coef[cnt] = -L(i, j);
          src[cnt++] = b.row(j);
        }
      }
      subtract_rows(k, m, coef, src, cnt, b.row(i));
      k.scal(m, 1.0 / L(i, i), b.row(i));
    }
  }
}

ComplexMatrix LuFactorization::solve(ComplexMatrix b) const {
  solve_in_place(b.view());
  return b;
}

ComplexMatrix LuFactorization::inverse() const { return solve(ComplexMatrix::identity(size())); }

ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || a.rows() != b.rows()) fail(ErrorCode::InvalidBlock, "solve_linear shape mismatch");
  return LuFactorization(a).solve(b);
}

ComplexMatrix inverse(const ComplexMatrix& a) { return LuFactorization(a).inverse(); }

ComplexMatrix invert_offdiag_identity(const ComplexMatrix& a, const ComplexMatrix& b, OffdiagForm form) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    fail(ErrorCode::InvalidBlock, "invert_offdiag_identity needs square blocks of equal size");
  }
  const Index n = a.rows();
  const ComplexMatrix eye = ComplexMatrix::identity(n);
  ComplexMatrix x_ab, x_ba;
  try {
    x_ab = inverse(a * b - eye);
    x_ba = inverse(b * a - eye);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::SingularInteraction, "AB - I is singular", e.condition());
  }

  ComplexMatrix out(2 * n, 2 * n);
  if (form == OffdiagForm::RightFactor) {
    copy_into(b * x_ab, out.block(0, 0, n, n));
    copy_into(-x_ba, out.block(0, n, n, n));
    copy_into(-x_ab, out.block(n, 0, n, n));
    copy_into(a * x_ba, out.block(n, n, n, n));
  } else {
    copy_into(x_ba * b, out.block(0, 0, n, n));
    copy_into(-x_ba, out.block(0, n, n, n));
    copy_into(-x_ab, out.block(n, 0, n, n));
    copy_into(x_ab * a, out.block(n, n, n, n));
  }
  return out;
}

}  // namespace netcascade
