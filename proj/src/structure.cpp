// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include "phem/structure.hpp"

#include <algorithm>
#include <cmath>
#include "phem/error.hpp"

namespace phem
{

namespace
{

using Index = Eigen::Index;

struct Range
{
  Index start;
  Index size;
};

Matrix cholesky_factor(const Matrix &Q)
{
  const Matrix Qs = symmetrize(Q);
  Eigen::LLT<Matrix> llt(Qs);
  if (llt.info() == Eigen::Success)
  {
    return llt.matrixL();
  }
  // Symmetric pivoting for marginally definite input: Q = P^T L D L^T P.
  Eigen::LDLT<Matrix> ldlt(Qs);
  const Vector d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 0.0))
  {
    throw Error(ErrorKind::NotPositiveDefinite, "Hamiltonian Hessian is not positive definite");
  }
  Matrix L = ldlt.matrixL();
  L = L * d.cwiseSqrt().asDiagonal();
  return ldlt.transpositionsP().transpose() * L;
}

// Sets the block (rows, cols) of J - R to zero by splitting it evenly between J and R, so
// that J stays skew-symmetric and R symmetric. Returns the norm of what was removed.
double zero_coupling(PhSystem &s, Range rows, Range cols)
{
  if (rows.size == 0 || cols.size == 0)
  {
    return 0.0;
  }
  const Matrix delta = s.J.block(rows.start, cols.start, rows.size, cols.size) -
                       s.R.block(rows.start, cols.start, rows.size, cols.size);
  s.J.block(rows.start, cols.start, rows.size, cols.size) -= 0.5 * delta;
  s.R.block(rows.start, cols.start, rows.size, cols.size) += 0.5 * delta;
  s.J.block(cols.start, rows.start, cols.size, rows.size) =
      -s.J.block(rows.start, cols.start, rows.size, cols.size).transpose();
  s.R.block(cols.start, rows.start, cols.size, rows.size) =
      s.R.block(rows.start, cols.start, rows.size, cols.size).transpose();
  return delta.norm();
}

double zero_input_rows(PhSystem &s, Range rows)
{
  if (rows.size == 0 || s.m() == 0)
  {
    return 0.0;
  }
  const Matrix delta = s.G.middleRows(rows.start, rows.size) - s.P.middleRows(rows.start, rows.size);
  s.G.middleRows(rows.start, rows.size) -= 0.5 * delta;
  s.P.middleRows(rows.start, rows.size) += 0.5 * delta;
  return delta.norm();
}

double coupling(const PhSystem &s, Range a, Range b)
{
  if (a.size == 0 || b.size == 0)
  {
    return 0.0;
  }
  return std::hypot(s.J.block(a.start, b.start, a.size, b.size).norm(),
                    s.R.block(a.start, b.start, a.size, b.size).norm());
}

// Orthonormal basis of the part of range(X) orthogonal to range(Y), keeping k columns.
Matrix complement_within(const Matrix &X, const Matrix &Y, Index k)
{
  if (k <= 0)
  {
    return Matrix::Zero(X.rows(), 0);
  }
  const Matrix M = Y.cols() > 0 ? Matrix(X - Y * (Y.transpose() * X)) : X;
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(k);
}

double staircase_tol(const Matrix &A, const Matrix &B, double tol)
{
  return tol * std::max({A.norm(), B.norm(), 1e-300});
}

Index kernel_dim(const Vector &ascending_eigs, double tol)
{
  const Index n = ascending_eigs.size();
  if (n == 0)
  {
    return 0;
  }
  const double lmax = std::max(ascending_eigs(n - 1), 0.0);
  Index k = 0;
  while (k < n && ascending_eigs(k) <= tol * lmax)
  {
    ++k;
  }
  return k;
}

PhSystem principal_subsystem(const PhSystem &s, Range r)
{
  return PhSystem(s.J.block(r.start, r.start, r.size, r.size),
                  s.R.block(r.start, r.start, r.size, r.size),
                  s.Q.block(r.start, r.start, r.size, r.size), s.G.middleRows(r.start, r.size),
                  s.P.middleRows(r.start, r.size), s.S, s.N);
}

}  // namespace

ExtendedPhSystem remove_unobservable_hamiltonian(const ExtendedPhSystem &sys, double tol)
{
  const PhSystem &ph = sys.ph;
  if (ph.n() == 0)
  {
    return sys;
  }
  const SymEig eq = sym_eig(symmetrize(ph.Q));
  const Index k = kernel_dim(eq.values, tol);
  if (k == 0)
  {
    return sys;
  }
  const Matrix V1 = eq.vectors.rightCols(ph.n() - k);
  PhSystem out = project_ph(ph, V1, V1);
  return ExtendedPhSystem(std::move(out));
}

ControllabilityForm kalman_controllability_form(const ExtendedPhSystem &sys, double tol)
{
  const PhSystem &ph = sys.ph;
  const Index n = ph.n();
  const Matrix L = cholesky_factor(ph.Q);

  const Matrix Jt = L.transpose() * ph.J * L;
  const Matrix Rt = L.transpose() * ph.R * L;
  const Matrix Gt = L.transpose() * ph.G;
  const Matrix Pt = L.transpose() * ph.P;
  const Matrix At = Jt - Rt;
  const Matrix Bt = Gt - Pt;
  const Staircase st = controllable_staircase(At, Bt, staircase_tol(At, Bt, tol));
  const Matrix &Vt = st.V;

  PhSystem out(Vt.transpose() * Jt * Vt, Vt.transpose() * Rt * Vt, Matrix::Identity(n, n),
               Vt.transpose() * Gt, Vt.transpose() * Pt, ph.S, ph.N);
  out.J = 0.5 * (out.J - out.J.transpose());
  out.R = symmetrize(out.R);

  const Index nc = st.dim_controllable;
  const Range c{0, nc}, u{nc, n - nc};
  zero_coupling(out, u, c);
  zero_input_rows(out, u);

  ControllabilityForm cf;
  cf.n_c = static_cast<int>(nc);
  cf.coupling_norm = coupling(out, u, c);
  cf.V = L.transpose().partialPivLu().solve(Vt);
  cf.sys = ExtendedPhSystem(std::move(out));
  return cf;
}

DecompositionReport kalman_full_form(const ExtendedPhSystem &sys, double tol)
{
  const PhSystem &ph = sys.ph;
  const Index n = ph.n();
  DecompositionReport rep;
  rep.tol_used = tol;

  // ker Q from the symmetric eigendecomposition
  const SymEig eq = sym_eig(symmetrize(ph.Q));
  const Index nker = kernel_dim(eq.values, tol);
  const Matrix K0 = eq.vectors.leftCols(nker);

  // controllable subspace of (A, B)
  const Matrix A = (ph.J - ph.R) * ph.Q;
  const Matrix B = ph.G - ph.P;
  const Staircase st = controllable_staircase(A, B, staircase_tol(A, B, tol));
  const Index nc = st.dim_controllable;
  const Matrix Vc = st.V.leftCols(nc);

  const Matrix Kc = subspace_intersection(Vc, K0, tol);
  const Index n_cno = Kc.cols();
  const Index n_co = nc - n_cno;
  const Index n_ncno = nker - n_cno;
  const Index n_nco = n - n_co - n_cno - n_ncno;

  const Matrix Cco = complement_within(Vc, Kc, n_co);
  const Matrix Knc = complement_within(K0, Kc, n_ncno);

  // Remaining directions: Q-orthogonal to the co block and orthogonal to ker Q.
  Matrix constraints(n, n_co + nker);
  constraints << ph.Q * Cco, K0;
  Matrix Cnco;
  if (n_nco > 0)
  {
    Cnco = orthogonal_complement(constraints).leftCols(n_nco);
  }
  else
  {
    Cnco = Matrix::Zero(n, 0);
  }

  // Normalize the Hamiltonian on the two observable blocks.
  auto normalize = [&](const Matrix &C) -> Matrix {
    if (C.cols() == 0)
    {
      return C;
    }
    const Matrix Lb = cholesky_factor(C.transpose() * ph.Q * C);
    return Lb.partialPivLu().solve(C.transpose()).transpose();
  };

  Matrix V(n, n);
  V << normalize(Cco), normalize(Cnco), Kc, Knc;

  PhSystem t = transform_ph(ph, V);
  const Range co{0, n_co}, nco{n_co, n_nco}, ncno{n_co + n_nco + n_cno, n_ncno};

  Matrix Qz = Matrix::Zero(n, n);
  Qz.topLeftCorner(n_co + n_nco, n_co + n_nco).setIdentity();
  double zeroed = (t.Q - Qz).norm();
  t.Q = Qz;
  zeroed = std::hypot(zeroed, zero_coupling(t, nco, co));
  zeroed = std::hypot(zeroed, zero_coupling(t, ncno, co));
  zeroed = std::hypot(zeroed, zero_input_rows(t, nco));
  zeroed = std::hypot(zeroed, zero_input_rows(t, ncno));

  rep.V = V;
  rep.dims = {static_cast<int>(n_co), static_cast<int>(n_nco), static_cast<int>(n_cno),
              static_cast<int>(n_ncno)};
  rep.coupling_norm = coupling(t, nco, co);
  rep.zeroed_norm = zeroed;
  rep.subsystem = ExtendedPhSystem(principal_subsystem(t, co));
  rep.transformed = ExtendedPhSystem(std::move(t));
  return rep;
}

ExtendedPhSystem minimal_realization(const ExtendedPhSystem &sys, double tol)
{
  return kalman_full_form(sys, tol).subsystem;
}

}  // namespace phem
