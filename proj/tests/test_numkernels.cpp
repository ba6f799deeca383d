// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <doctest.h>
#include "phem/error.hpp"
#include "phem/numkernels.hpp"
#include "test_util.hpp"

using namespace phem;
using namespace phem::test;

namespace
{

Matrix krylov(const Matrix &A, const Matrix &B)
{
  const Eigen::Index n = A.rows(), m = B.cols();
  Matrix K(n, n * m);
  Matrix blk = B;
  for (Eigen::Index k = 0; k < n; ++k)
  {
    K.middleCols(k * m, m) = blk;
    blk = A * blk;
  }
  return K;
}

Eigen::Index numerical_rank(const Matrix &M, double rel)
{
  Eigen::JacobiSVD<Matrix> svd(M);
  const Vector s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > rel * s(0))
  {
    ++r;
  }
  return r;
}

double are_residual(const Matrix &A, const Matrix &B, const Matrix &C, const Matrix &D,
                    const Matrix &X)
{
  const Matrix Rinv = (D + D.transpose()).inverse();
  const Matrix K = X * B - C.transpose();
  const Matrix res = A.transpose() * X + X * A + K * Rinv * K.transpose();
  return res.norm();
}

}  // namespace

TEST_CASE("lyapunov: diagonal and printed Gramian")
{
  const Matrix X = solve_lyapunov(-Matrix::Identity(2, 2), Matrix::Identity(2, 2)).X;
  CHECK(max_abs_diff(X, 0.5 * Matrix::Identity(2, 2)) < 1e-15);

  Matrix A(2, 2);
  A << -2, 1, -1, -1;
  Matrix G(2, 1);
  G << 6, 0;
  Matrix expected(2, 2);
  expected << 8, -2, -2, 2;
  const MatrixSolution s = solve_lyapunov(A, G * G.transpose());
  CHECK(max_abs_diff(s.X, expected) < 1e-12);
  CHECK(s.report.residual_rel < 1e-14);
}

TEST_CASE("lyapunov: random residuals and semidefiniteness")
{
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial)
  {
    const Matrix A = random_stable(5, rng);
    const Matrix F = randn(5, 2, rng);
    const MatrixSolution s = solve_lyapunov(A, F * F.transpose());
    const Matrix res = A * s.X + s.X * A.transpose() + F * F.transpose();
    CHECK(s.report.residual_rel < 1e-12);
    CHECK(res.norm() / (2 * A.norm() * s.X.norm()) < 1e-12);
    CHECK((s.X - s.X.transpose()).norm() == 0.0);
    CHECK(min_eigenvalue(s.X) > -1e-10 * s.X.norm());
  }
}

TEST_CASE("lyapunov: singular pencil")
{
  Matrix A(2, 2);
  A << 1, 0, 0, -1;
  CHECK_THROWS_AS(solve_lyapunov(A, Matrix::Identity(2, 2)), Error);
  try
  {
    solve_lyapunov(A, Matrix::Identity(2, 2));
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::SingularPencil);
  }
}

TEST_CASE("sylvester: printed cross Gramian, scalar formula, random residual")
{
  Matrix A(2, 2);
  A << -2, 1, -1, -1;
  Matrix B(2, 1);
  B << 6, 0;
  const Matrix F = Matrix::Constant(1, 1, -2.0);
  const Matrix Y = solve_sylvester(A, F, B * Matrix::Constant(1, 1, 6.0)).X;
  Matrix expected(2, 1);
  expected << 108.0 / 13.0, -36.0 / 13.0;
  CHECK(max_abs_diff(Y, expected) < 1e-12);

  const Matrix y = solve_sylvester(Matrix::Constant(1, 1, -3.0), Matrix::Constant(1, 1, -5.0),
                                   Matrix::Constant(1, 1, 2.0))
                       .X;
  CHECK(std::abs(y(0, 0) - 2.0 / 8.0) < 1e-15);

  Rng rng(12);
  const Matrix A6 = random_stable(6, rng);
  const Matrix F3 = random_stable(3, rng);
  const Matrix M = randn(6, 3, rng);
  const MatrixSolution s = solve_sylvester(A6, F3, M);
  CHECK(s.report.residual_rel < 1e-12);
  CHECK((A6 * s.X + s.X * F3 + M).norm() / M.norm() < 1e-12);
}

TEST_CASE("riccati: scalar quadratic formula and printed interval")
{
  const Matrix one = Matrix::Constant(1, 1, 1.0);
  const AreSolution lo = solve_are_extremal(-one, one, one, one, AreBranch::Min);
  const AreSolution hi = solve_are_extremal(-one, one, one, one, AreBranch::Max);
  CHECK(std::abs(lo.X(0, 0) - (3.0 - 2.0 * std::sqrt(2.0))) < 1e-13);
  CHECK(std::abs(hi.X(0, 0) - (3.0 + 2.0 * std::sqrt(2.0))) < 1e-13);
  CHECK(lo.closed_loop_eigenvalues(0).real() < 0.0);
  CHECK(hi.closed_loop_eigenvalues(0).real() > 0.0);

  const Matrix a = Matrix::Constant(1, 1, -2.0), b = Matrix::Constant(1, 1, 6.0);
  const double xmin = solve_are_extremal(a, b, b, one, AreBranch::Min).X(0, 0);
  const double xmax = solve_are_extremal(a, b, b, one, AreBranch::Max).X(0, 0);
  CHECK(std::abs(xmin - (10.0 / 9.0 - std::sqrt(76.0) / 18.0)) < 1e-12);
  CHECK(std::abs(xmax - (10.0 / 9.0 + std::sqrt(76.0) / 18.0)) < 1e-12);
}

TEST_CASE("riccati: errors")
{
  const Matrix one = Matrix::Constant(1, 1, 1.0);
  const Matrix zero = Matrix::Zero(1, 1);
  try
  {
    solve_are_extremal(-one, one, one, zero, AreBranch::Min);
    FAIL("expected an exception");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::FeedthroughSingular);
  }
  // unstable scalar system with positive Popov function: the stabilizing solution is negative
  try
  {
    solve_are_extremal(one, one, one, 2.0 * one, AreBranch::Min);
    FAIL("expected an exception");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::IndefiniteSolution);
  }
}

TEST_CASE("riccati: random passive instances")
{
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial)
  {
    const PhSystem ph = random_ph(6, 2, rng);
    const Matrix A = (ph.J - ph.R) * ph.Q, B = ph.G - ph.P;
    const Matrix C = (ph.G + ph.P).transpose() * ph.Q, D = ph.S - ph.N;
    const AreSolution lo = solve_are_extremal(A, B, C, D, AreBranch::Min);
    const AreSolution hi = solve_are_extremal(A, B, C, D, AreBranch::Max);
    CHECK(lo.residual_rel < 1e-10);
    CHECK(hi.residual_rel < 1e-10);
    CHECK(are_residual(A, B, C, D, lo.X) / (A.norm() * lo.X.norm() + C.norm()) < 1e-10);
    CHECK(min_eigenvalue(hi.X - lo.X) > -1e-10);
    CHECK(lo.closed_loop_eigenvalues.real().maxCoeff() < 0.0);
    CHECK(hi.closed_loop_eigenvalues.real().minCoeff() > 0.0);
    // Q lies between the two extremal solutions
    CHECK(min_eigenvalue(ph.Q - lo.X) > -1e-8);
    CHECK(min_eigenvalue(hi.X - ph.Q) > -1e-8);
  }
}

TEST_CASE("sym_eig")
{
  const SymEig e1 = sym_eig(Matrix::Identity(2, 2));
  CHECK(max_abs_diff(e1.values, Vector::Ones(2)) == 0.0);
  Matrix S(2, 2);
  S << 0, 0, 0, 2;
  const SymEig e2 = sym_eig(S);
  CHECK(std::abs(e2.values(0)) < 1e-15);
  CHECK(std::abs(e2.values(1) - 2.0) < 1e-15);

  Rng rng(14);
  Matrix X = randn(5, 5, rng);
  X = symmetrize(X);
  const SymEig e = sym_eig(X);
  CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(5, 5)).norm() < 1e-12);
  CHECK((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - X).norm() < 1e-12);
  for (Eigen::Index i = 1; i < 5; ++i)
  {
    CHECK(e.values(i - 1) <= e.values(i));
  }
}

TEST_CASE("staircase")
{
  Matrix A(2, 2);
  A << -1, 0, 2, -2;
  Matrix B(2, 1);
  B << 1, 0;
  CHECK(controllable_staircase(A, B, 1e-12).dim_controllable == 2);
  CHECK(controllable_staircase(A, Matrix::Zero(2, 1), 1e-12).dim_controllable == 0);

  Rng rng(15);
  for (int trial = 0; trial < 5; ++trial)
  {
    const Matrix A6 = randn(6, 6, rng), B6 = randn(6, 2, rng);
    const Staircase st = controllable_staircase(A6, B6, default_rank_tol(A6));
    CHECK(st.dim_controllable == numerical_rank(krylov(A6, B6), 1e-10));
    CHECK(st.dim_controllable == 6);
    CHECK((st.V.transpose() * st.V - Matrix::Identity(6, 6)).norm() < 1e-12);
  }

  // uncontrollable by construction: block triangular pair hidden by an orthogonal change
  for (int trial = 0; trial < 5; ++trial)
  {
    Matrix At = randn(6, 6, rng);
    At.bottomLeftCorner(2, 4).setZero();
    Matrix Bt = randn(6, 2, rng);
    Bt.bottomRows(2).setZero();
    const Matrix U = random_orthogonal(6, rng);
    const Matrix A6 = U * At * U.transpose(), B6 = U * Bt;
    const double tol = 1e-10 * A6.norm();
    const Staircase st = controllable_staircase(A6, B6, tol);
    CHECK(st.dim_controllable == 4);
    CHECK(st.dim_controllable == numerical_rank(krylov(A6, B6), 1e-9));
    CHECK(st.zero_block_norm < tol * A6.norm());
    const Matrix T = st.V.transpose() * A6 * st.V;
    CHECK(T.bottomLeftCorner(2, 4).norm() < 1e-12 * A6.norm());
  }
}

TEST_CASE("subspace intersection and complement")
{
  Matrix U1 = Matrix::Zero(3, 2), U2 = Matrix::Zero(3, 2);
  U1(0, 0) = 1;
  U1(1, 1) = 1;
  U2(1, 0) = 1;
  U2(2, 1) = 1;
  const Matrix X = subspace_intersection(U1, U2, 1e-10);
  REQUIRE(X.cols() == 1);
  CHECK(std::abs(std::abs(X(1, 0)) - 1.0) < 1e-14);
  const Matrix C = orthogonal_complement(U1);
  REQUIRE(C.cols() == 1);
  CHECK(std::abs(std::abs(C(2, 0)) - 1.0) < 1e-14);
}
