#include <gtest/gtest.h>

#include "netcascade/error.hpp"
#include "netcascade/linalg/lu.hpp"
#include "test_support.hpp"

using namespace netcascade;
using namespace nc_test;

TEST(Matrix, ConstructionAndIdentity) {
  const ComplexMatrix i3 = ComplexMatrix::identity(3);
  EXPECT_EQ(i3(0, 0), cplx(1.0));
  EXPECT_EQ(i3(0, 1), cplx(0.0));
  const ComplexMatrix m{{1.0, cplx(0, 2)}, {3.0, 4.0}};
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.transpose()(0, 1), cplx(3.0));
  EXPECT_EQ(m.adjoint()(1, 0), cplx(0, -2));
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<cplx>(3)), Error);
}

TEST(Matrix, BlocksAliasStorage) {
  ComplexMatrix m(4, 4);
  MatrixView b = m.block(1, 2, 2, 2);
  b(1, 1) = 7.0;
  EXPECT_EQ(m(2, 3), cplx(7.0));
  ComplexMatrix copy(m.block(2, 2, 2, 2));
  EXPECT_EQ(copy(0, 1), cplx(7.0));
}

TEST(Matrix, RelativeErrorAndSymmetry) {
  const ComplexMatrix a{{1.0, 2.0}, {2.0, 1.0}};
  EXPECT_TRUE(is_symmetric(a, 0.0));
  ComplexMatrix b = a;
  b(0, 1) += 1e-9;
  EXPECT_FALSE(is_symmetric(b, 1e-12));
  EXPECT_TRUE(is_symmetric(b, 1e-6));
  EXPECT_NEAR(relative_error(b, a), 1e-9 / std::sqrt(10.0), 1e-15);
  EXPECT_DOUBLE_EQ(relative_error(a, ComplexMatrix(2, 2)), frobenius_norm(a));
}

TEST(Matrix, BlockDiag) {
  const BlockDiagonal bd = block_diag({ComplexMatrix{{1.0}}, ComplexMatrix{{2.0, 3.0}, {4.0, 5.0}}});
  EXPECT_EQ(bd.matrix.rows(), 3u);
  EXPECT_EQ(bd.matrix(1, 2), cplx(3.0));
  EXPECT_EQ(bd.matrix(0, 1), cplx(0.0));
  EXPECT_EQ(bd.layout.begin(1), 1u);
  EXPECT_EQ(bd.layout.extent(1), 2u);
  try {
    (void)block_diag({ComplexMatrix(2, 3)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidBlock);
  }
  EXPECT_THROW((void)block_diag({ComplexMatrix{{1.0}}, ComplexMatrix()}), Error);
}

TEST(Gemm, MatchesEigenOnRandomShapes) {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Index m = uniform_index(rng, 1, 70), k = uniform_index(rng, 1, 300), n = uniform_index(rng, 1, 70);
    const ComplexMatrix a = random_matrix(rng, m, k), b = random_matrix(rng, k, n);
    ComplexMatrix c = random_matrix(rng, m, n);
    const cplx alpha = rng.complex_normal(), beta = rng.complex_normal();
    const EMat ref = alpha * to_eigen(a) * to_eigen(b) + beta * to_eigen(c);
    gemm(alpha, a, b, beta, c.view());
    EXPECT_LT(rel(c, from_eigen(ref)), 1e-13) << m << "x" << k << "x" << n;
  }
}

TEST(Gemm, SparseLeftOperandAndViews) {
  Rng rng(12);
  ComplexMatrix a = random_matrix(rng, 40, 40);
  for (Index r = 0; r < 40; ++r)
    for (Index c = 0; c < 40; ++c)
      if ((r / 10) != (c / 10)) a(r, c) = 0.0;
  const ComplexMatrix big = random_matrix(rng, 60, 50);
  ConstMatrixView b = big.block(5, 3, 40, 30);
  ComplexMatrix c(40, 30);
  gemm(1.0, a, b, 0.0, c.view());
  const EMat ref = to_eigen(a) * to_eigen(ComplexMatrix(b));
  EXPECT_LT(rel(c, from_eigen(ref)), 1e-14);
}

TEST(Gemm, ShapeMismatchThrows) {
  ComplexMatrix c(2, 2);
  EXPECT_THROW(gemm(1.0, ComplexMatrix(2, 3), ComplexMatrix(2, 2), 0.0, c.view()), Error);
}

TEST(Lu, SolveAndInverseMatchEigen) {
  Rng rng(13);
  for (Index n : {1u, 2u, 7u, 63u, 64u, 65u, 150u}) {
    const ComplexMatrix a = random_matrix(rng, n, n);
    const ComplexMatrix b = random_matrix(rng, n, 5);
    EXPECT_LT(rel(solve_linear(a, b), oracle_solve(a, b)), 1e-11) << n;
    EXPECT_LT(rel(inverse(a), oracle_inverse(a)), 1e-11) << n;
    EXPECT_LT(rel(a * inverse(a), ComplexMatrix::identity(n)), 1e-11);
  }
}

TEST(Lu, SingularReportsCondition) {
  ComplexMatrix a{{1.0, 2.0}, {2.0, 4.0}};
  try {
    LuFactorization lu(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
    ASSERT_TRUE(e.condition().has_value());
  }
  ComplexMatrix near{{1.0, 0.0}, {0.0, 1e-16}};
  EXPECT_THROW(LuFactorization{near}, Error);
  EXPECT_NO_THROW(LuFactorization(ComplexMatrix{{1.0, 0.0}, {0.0, 1e-10}}));
}

TEST(OffdiagInverse, BothFormsInvertAndAgree) {
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = uniform_index(rng, 1, 40);
    const ComplexMatrix a = random_contraction(rng, n), b = random_contraction(rng, n);
    ComplexMatrix full(2 * n, 2 * n);
    copy_into(a, full.block(0, 0, n, n));
    copy_into(b, full.block(n, n, n, n));
    for (Index i = 0; i < n; ++i) full(i, n + i) = full(n + i, i) = 1.0;
    const ComplexMatrix r = invert_offdiag_identity(a, b, OffdiagForm::RightFactor);
    const ComplexMatrix l = invert_offdiag_identity(a, b, OffdiagForm::LeftFactor);
    EXPECT_LT(rel(full * r, ComplexMatrix::identity(2 * n)), 1e-12);
    EXPECT_LT(rel(l * full, ComplexMatrix::identity(2 * n)), 1e-12);
    EXPECT_LT(rel(r, l), 1e-13);
    EXPECT_LT(rel(r, oracle_inverse(full)), 1e-12);
  }
}

TEST(OffdiagInverse, SingularInteraction) {
  // A B = I makes AB - I singular.
  const ComplexMatrix a = ComplexMatrix::identity(2);
  try {
    (void)invert_offdiag_identity(a, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularInteraction);
  }
}
