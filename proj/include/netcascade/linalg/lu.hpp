#pragma once

#include <vector>

#include "netcascade/linalg/matrix.hpp"

namespace netcascade {

// Pivot-ratio condition estimate above which a matrix is treated as singular.
inline constexpr double kSingularConditionLimit = 1e14;

// Blocked right-looking LU with partial pivoting, PA = LU.
class LuFactorization {
 public:
  // Throws SingularMatrix (with the condition estimate attached) when a pivot
  // vanishes or max|u_ii| / min|u_ii| exceeds kSingularConditionLimit.
  explicit LuFactorization(ComplexMatrix a);

  Index size() const noexcept { return lu_.rows(); }
  double condition_estimate() const noexcept { return condition_; }

  void solve_in_place(MatrixView b) const;
  ComplexMatrix solve(ComplexMatrix b) const;
  ComplexMatrix inverse() const;

 private:
  ComplexMatrix lu_;
  std::vector<Index> perm_;  // row i of PA is row perm_[i] of A
  double condition_ = 1.0;
};

ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);

// Which of the two equivalent factorizations of inv([[A, I], [I, B]]) to use:
//   RightFactor: [[B, -I], [-I, A]] * blockdiag((AB-I)^-1, (BA-I)^-1)
//   LeftFactor:  blockdiag((BA-I)^-1, (AB-I)^-1) * [[B, -I], [-I, A]]
enum class OffdiagForm { RightFactor, LeftFactor };

// Inverse of [[A, I], [I, B]] from the two n x n inverses (AB-I)^-1 and (BA-I)^-1.
// Throws SingularInteraction when either is singular.
ComplexMatrix invert_offdiag_identity(const ComplexMatrix& a, const ComplexMatrix& b,
                                      OffdiagForm form = OffdiagForm::RightFactor);

}  // namespace netcascade
