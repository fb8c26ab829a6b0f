#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace netcascade {

using cplx = std::complex<double>;
using Index = std::size_t;

struct ConstMatrixView {
  const cplx* data = nullptr;
  Index rows = 0;
  Index cols = 0;
  Index stride = 0;

  const cplx& operator()(Index r, Index c) const { return data[r * stride + c]; }
  const cplx* row(Index r) const { return data + r * stride; }
  ConstMatrixView block(Index r0, Index c0, Index nr, Index nc) const {
    return {data + r0 * stride + c0, nr, nc, stride};
  }
};

struct MatrixView {
  cplx* data = nullptr;
  Index rows = 0;
  Index cols = 0;
  Index stride = 0;

  cplx& operator()(Index r, Index c) const { return data[r * stride + c]; }
  cplx* row(Index r) const { return data + r * stride; }
  MatrixView block(Index r0, Index c0, Index nr, Index nc) const {
    return {data + r0 * stride + c0, nr, nc, stride};
  }
  operator ConstMatrixView() const { return {data, rows, cols, stride}; }
};

// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(Index rows, Index cols);
  ComplexMatrix(Index rows, Index cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);
  explicit ComplexMatrix(ConstMatrixView v);

  static ComplexMatrix identity(Index n);
  static ComplexMatrix diagonal(std::span<const cplx> d);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(Index r, Index c) { return data_[r * cols_ + c]; }
  const cplx& operator()(Index r, Index c) const { return data_[r * cols_ + c]; }
  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }
  const std::vector<cplx>& entries() const noexcept { return data_; }

  MatrixView view() { return {data_.data(), rows_, cols_, cols_}; }
  ConstMatrixView view() const { return {data_.data(), rows_, cols_, cols_}; }
  operator ConstMatrixView() const { return view(); }
  MatrixView block(Index r0, Index c0, Index nr, Index nc) { return view().block(r0, c0, nr, nc); }
  ConstMatrixView block(Index r0, Index c0, Index nr, Index nc) const {
    return view().block(r0, c0, nr, nc);
  }

  ComplexMatrix transpose() const;
  ComplexMatrix adjoint() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// C = alpha * A * B + beta * C. Depth slices of A that are mostly zero take a
// path that skips the zeros, so block-sparse left operands stay cheap.
void gemm(cplx alpha, ConstMatrixView a, ConstMatrixView b, cplx beta, MatrixView c);
ComplexMatrix multiply(ConstMatrixView a, ConstMatrixView b);

void copy_into(ConstMatrixView src, MatrixView dst);

ComplexMatrix select(const ComplexMatrix& m, std::span<const Index> rows, std::span<const Index> cols);
ComplexMatrix select_rows(const ComplexMatrix& m, std::span<const Index> rows);

double frobenius_norm(ConstMatrixView m);
// ||x - ref||_F / ||ref||_F, or ||x||_F when ref is zero.
double relative_error(const ComplexMatrix& x, const ComplexMatrix& ref);
double max_abs(ConstMatrixView m);
bool is_symmetric(const ComplexMatrix& m, double rel_tol);

class BlockLayout {
 public:
  BlockLayout() : offsets_{0} {}
  explicit BlockLayout(std::vector<Index> offsets);

  Index block_count() const noexcept { return offsets_.size() - 1; }
  Index begin(Index block) const { return offsets_.at(block); }
  Index end(Index block) const { return offsets_.at(block + 1); }
  Index extent(Index block) const { return end(block) - begin(block); }
  Index dimension() const noexcept { return offsets_.back(); }
  const std::vector<Index>& offsets() const noexcept { return offsets_; }

 private:
  std::vector<Index> offsets_;
};

struct BlockDiagonal {
  ComplexMatrix matrix;
  BlockLayout layout;
};

BlockDiagonal block_diag(std::span<const ComplexMatrix> blocks);
BlockDiagonal block_diag(std::initializer_list<ComplexMatrix> blocks);

}  // namespace netcascade
