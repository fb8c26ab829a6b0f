#include "netcascade/linalg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netcascade/error.hpp"
#include "netcascade/linalg/kernels.hpp"

namespace netcascade {

ComplexMatrix::ComplexMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(Index rows, Index cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    fail(ErrorCode::InvalidBlock, "entry count " + std::to_string(data_.size()) + " does not match " +
                                      std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::InvalidBlock, "ragged initializer list");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix::ComplexMatrix(ConstMatrixView v) : ComplexMatrix(v.rows, v.cols) {
  for (Index r = 0; r < v.rows; ++r) std::copy_n(v.row(r), v.cols, data_.data() + r * cols_);
}

ComplexMatrix ComplexMatrix::identity(Index n) {
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size(), d.size());
  for (Index i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (Index r = 0; r < rows_; ++r)
    for (Index c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (Index r = 0; r < rows_; ++r)
    for (Index c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
  return t;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

static void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::InvalidBlock, "shape mismatch " + std::to_string(a.rows()) + "x" +
                                      std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                      std::to_string(b.cols()));
  }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other);
  for (Index i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other);
  for (Index i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  kernels::active().scal(data_.size(), s, data_.data());
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }

ComplexMatrix multiply(ConstMatrixView a, ConstMatrixView b) {
  ComplexMatrix c(a.rows, b.cols);
  gemm(1.0, a, b, 0.0, c.view());
  return c;
}

void copy_into(ConstMatrixView src, MatrixView dst) {
  if (src.rows != dst.rows || src.cols != dst.cols) fail(ErrorCode::InvalidBlock, "copy_into shape mismatch");
  for (Index r = 0; r < src.rows; ++r) std::copy_n(src.row(r), src.cols, dst.row(r));
}

ComplexMatrix select(const ComplexMatrix& m, std::span<const Index> rows, std::span<const Index> cols) {
  ComplexMatrix out(rows.size(), cols.size());
  for (Index i = 0; i < rows.size(); ++i) {
    if (rows[i] >= m.rows()) fail(ErrorCode::InvalidBlock, "row index out of range");
    for (Index j = 0; j < cols.size(); ++j) {
      if (cols[j] >= m.cols()) fail(ErrorCode::InvalidBlock, "column index out of range");
      out(i, j) = m(rows[i], cols[j]);
    }
  }
  return out;
}

ComplexMatrix select_rows(const ComplexMatrix& m, std::span<const Index> rows) {
  ComplexMatrix out(rows.size(), m.cols());
  for (Index i = 0; i < rows.size(); ++i) {
    if (rows[i] >= m.rows()) fail(ErrorCode::InvalidBlock, "row index out of range");
    std::copy_n(m.view().row(rows[i]), m.cols(), out.view().row(i));
  }
  return out;
}

double frobenius_norm(ConstMatrixView m) {
  const auto& k = kernels::active();
  double s = 0.0;
  for (Index r = 0; r < m.rows; ++r) s += k.sum_abs2(m.cols, m.row(r));
  return std::sqrt(s);
}

double relative_error(const ComplexMatrix& x, const ComplexMatrix& ref) {
  const double diff = frobenius_norm(x - ref);
  const double scale = frobenius_norm(ref);
  return scale > 0.0 ? diff / scale : diff;
}

double max_abs(ConstMatrixView m) {
  double best = 0.0;
  for (Index r = 0; r < m.rows; ++r)
    for (Index c = 0; c < m.cols; ++c) best = std::max(best, std::abs(m(r, c)));
  return best;
}

bool is_symmetric(const ComplexMatrix& m, double rel_tol) {
  if (!m.is_square()) return false;
  return relative_error(m.transpose(), m) <= rel_tol;
}

BlockLayout::BlockLayout(std::vector<Index> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.empty() || offsets_.front() != 0) fail(ErrorCode::InvalidBlock, "block offsets must start at 0");
  for (Index i = 1; i < offsets_.size(); ++i) {
    if (offsets_[i] <= offsets_[i - 1]) fail(ErrorCode::InvalidBlock, "block offsets must be strictly increasing");
  }
}

BlockDiagonal block_diag(std::span<const ComplexMatrix> blocks) {
  std::vector<Index> offsets{0};
  for (const auto& b : blocks) {
    if (!b.is_square() || b.rows() == 0) {
      fail(ErrorCode::InvalidBlock, "block_diag needs nonempty square blocks, got " + std::to_string(b.rows()) +
                                        "x" + std::to_string(b.cols()));
    }
    offsets.push_back(offsets.back() + b.rows());
  }
  ComplexMatrix out(offsets.back(), offsets.back());
  for (Index i = 0; i < blocks.size(); ++i) {
    copy_into(blocks[i], out.block(offsets[i], offsets[i], blocks[i].rows(), blocks[i].cols()));
  }
  return {std::move(out), BlockLayout(std::move(offsets))};
}

BlockDiagonal block_diag(std::initializer_list<ComplexMatrix> blocks) {
  return block_diag(std::span<const ComplexMatrix>(blocks.begin(), blocks.size()));
}

}  // namespace netcascade
