// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include "phem/kyp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <Eigen/Eigenvalues>
#include "phem/error.hpp"

namespace phem
{

namespace
{

double sym_norm2(const Matrix &S)
{
  if (S.size() == 0)
  {
    return 0.0;
  }
  const Vector ev = sym_eig(S).values;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

KypCertificate make_certificate(const LtiSystem &sys, const AreSolution &sol, double eps)
{
  KypCertificate cert;
  cert.X = sol.X;
  cert.min_eig_X = sol.X.size() > 0 ? min_eigenvalue(sol.X) : 0.0;
  const Matrix W = symmetrize(kyp_matrix(sys, sol.X));
  cert.min_eig_W = W.size() > 0 ? min_eigenvalue(W) : 0.0;
  cert.are_residual_rel = sol.residual_rel;
  cert.closed_loop_eigenvalues = sol.closed_loop_eigenvalues;
  cert.feedthrough_eps = eps;
  return cert;
}

double feedthrough_scale(const LtiSystem &sys)
{
  return sys.D.size() > 0 ? std::max(1.0, sys.D.cwiseAbs().maxCoeff()) : 1.0;
}

AreSolution max_from_dual(const LtiSystem &sys)
{
  const AreSolution dual =
      solve_are_extremal(sys.A.transpose(), sys.C.transpose(), sys.B.transpose(),
                         sys.D.transpose(), AreBranch::Min);
  Eigen::LLT<Matrix> llt(dual.X);
  const double lmin = dual.X.size() > 0 ? min_eigenvalue(dual.X) : 1.0;
  if (llt.info() != Eigen::Success ||
      !(lmin > 1e3 * std::numeric_limits<double>::epsilon() * dual.X.norm()))
  {
    throw Error(ErrorKind::NoStableInvariantSubspace,
                "maximal Riccati solution is unbounded (dual minimal solution is singular)");
  }
  AreSolution hi;
  hi.X = symmetrize(llt.solve(Matrix::Identity(sys.n(), sys.n())));
  const Eigen::FullPivLU<Matrix> rlu(sys.D + sys.D.transpose());
  const Matrix K = hi.X * sys.B - sys.C.transpose();
  const Matrix res = sys.A.transpose() * hi.X + hi.X * sys.A + K * rlu.solve(K.transpose());
  hi.residual_rel = res.norm() / std::max(1e-300, 2.0 * (sys.A.transpose() * hi.X).norm() +
                                                     (K * rlu.solve(K.transpose())).norm());
  const Matrix Acl = sys.A + sys.B * rlu.solve(sys.B.transpose() * hi.X - sys.C);
  hi.closed_loop_eigenvalues = Eigen::EigenSolver<Matrix>(Acl, false).eigenvalues();
  return hi;
}

}  // namespace

Matrix kyp_matrix(const LtiSystem &sys, const MatrixRef &X)
{
  const auto n = sys.n(), m = sys.m();
  if (X.rows() != n || X.cols() != n)
  {
    throw Error(ErrorKind::DimensionMismatch, "X must be " + std::to_string(n) + "x" +
                                                  std::to_string(n));
  }
  if (sys.p() != m)
  {
    throw Error(ErrorKind::DimensionMismatch, "KYP matrix needs as many outputs as inputs");
  }
  Matrix W(n + m, n + m);
  const Matrix off = sys.C - sys.B.transpose() * X;
  W.topLeftCorner(n, n) = -sys.A.transpose() * X - X * sys.A;
  W.topRightCorner(n, m) = off.transpose();
  W.bottomLeftCorner(m, n) = off;
  W.bottomRightCorner(m, m) = sys.D + sys.D.transpose();
  return W;
}

Feasibility is_feasible(const LtiSystem &sys, const MatrixRef &X, double tol)
{
  Feasibility f;
  const Matrix W = symmetrize(kyp_matrix(sys, X));
  const Matrix Xs = symmetrize(X);
  f.min_eig_W = W.size() > 0 ? min_eigenvalue(W) : 0.0;
  f.min_eig_X = Xs.size() > 0 ? min_eigenvalue(Xs) : std::numeric_limits<double>::infinity();
  f.tol_W = tol * std::max(1.0, sym_norm2(W));
  f.tol_X = tol * std::max(1.0, sym_norm2(Xs));
  f.feasible = f.min_eig_W >= -f.tol_W && f.min_eig_X > f.tol_X;
  return f;
}

std::pair<KypCertificate, KypCertificate> extremal_solutions(const LtiSystem &sys)
{
  const AreSolution lo = solve_are_extremal(sys.A, sys.B, sys.C, sys.D, AreBranch::Min);
  AreSolution hi;
  try
  {
    hi = solve_are_extremal(sys.A, sys.B, sys.C, sys.D, AreBranch::Max);
  }
  catch (const Error &e)
  {
    // X_max is the inverse of the minimal solution of the dual system
    if (e.kind() != ErrorKind::NoStableInvariantSubspace)
    {
      throw;
    }
    hi = max_from_dual(sys);
  }
  KypCertificate cmin = make_certificate(sys, lo, 0.0);
  KypCertificate cmax = make_certificate(sys, hi, 0.0);

  if (sys.n() > 0 && spectral_abscissa(sys.A) < 0.0)
  {
    const Matrix Pc = solve_lyapunov(sys.A, sys.B * sys.B.transpose()).X;
    const Vector ev = sym_eig(Pc).values;
    const double rank_tol = static_cast<double>(sys.n()) *
                            std::numeric_limits<double>::epsilon() * ev(ev.size() - 1);
    if (ev(0) <= rank_tol)
    {
      const std::string w =
          "controllability Gramian is numerically singular; the system may not be minimal";
      cmin.warnings.push_back(w);
      cmax.warnings.push_back(w);
    }
  }
  return {std::move(cmin), std::move(cmax)};
}

KypCertificate strictly_feasible_solution(const LtiSystem &sys)
{
  if (sys.m() == 0 || min_eigenvalue(symmetrize(sys.D + sys.D.transpose())) <= 0.0)
  {
    throw Error(ErrorKind::NoInteriorPoint,
                "a strictly feasible KYP solution needs D + D^T positive definite");
  }
  const Eigen::LLT<Matrix> rllt(symmetrize(sys.D + sys.D.transpose()));
  const Matrix L = rllt.matrixL().solve(sys.C);
  const double scale = std::max({(L.transpose() * L).norm(), sys.A.norm(), 1e-300});
  std::string last = "no shift tried";
  for (int k = 1; k <= 14; ++k)
  {
    const double shift = scale * std::pow(10.0, -k);
    try
    {
      const AreSolution lo =
          solve_are_extremal(sys.A, sys.B, sys.C, sys.D, AreBranch::Min, shift);
      Matrix X = lo.X;
      try
      {
        const AreSolution hi =
            solve_are_extremal(sys.A, sys.B, sys.C, sys.D, AreBranch::Max, shift);
        X = symmetrize(0.5 * (lo.X + hi.X));
      }
      catch (const Error &)
      {
        // the shifted minimal solution alone is already strictly feasible
      }
      const Matrix W = symmetrize(kyp_matrix(sys, X));
      if (Eigen::LLT<Matrix>(W).info() == Eigen::Success &&
          Eigen::LLT<Matrix>(symmetrize(X)).info() == Eigen::Success)
      {
        AreSolution sol = lo;
        sol.X = X;
        KypCertificate cert = make_certificate(sys, sol, 0.0);
        cert.are_residual_rel.reset();
        return cert;
      }
      last = "KYP matrix not positive definite at shift " + std::to_string(shift);
    }
    catch (const Error &e)
    {
      last = e.what();
    }
  }
  throw Error(ErrorKind::NoInteriorPoint, "no strictly feasible KYP solution found: " + last);
}

PassivityReport is_passive(const LtiSystem &sys, double tol)
{
  PassivityReport rep;
  if (sys.p() != sys.m())
  {
    rep.diagnostic = "passivity needs as many outputs as inputs";
    return rep;
  }
  if (sys.n() > 0 && !(spectral_abscissa(sys.A) < 0.0))
  {
    rep.diagnostic = "A is not asymptotically stable";
    return rep;
  }

  LtiSystem work = sys;
  double eps = 0.0;
  if (sys.m() > 0)
  {
    const double dmin = min_eigenvalue(sys.D + sys.D.transpose());
    const double scale = feedthrough_scale(sys);
    if (dmin < -tol * scale)
    {
      rep.diagnostic = "D + D^T has a negative eigenvalue " + std::to_string(dmin);
      return rep;
    }
    if (dmin < 1e-12 * scale)
    {
      eps = kArtificialFeedthrough;
      work = with_feedthrough(sys, eps);
    }
  }

  try
  {
    const AreSolution lo = solve_are_extremal(work.A, work.B, work.C, work.D, AreBranch::Min);
    rep.certificate = make_certificate(work, lo, eps);
  }
  catch (const Error &e)
  {
    rep.diagnostic = e.what();
    return rep;
  }

  const Matrix &X = rep.certificate.X;
  const double xtol = tol * std::max(1.0, X.size() > 0 ? X.cwiseAbs().maxCoeff() : 0.0);
  const Matrix W = symmetrize(kyp_matrix(work, X));
  const double wtol = tol * std::max(1.0, sym_norm2(W));
  rep.passive = rep.certificate.min_eig_X >= -xtol && rep.certificate.min_eig_W >= -wtol;
  if (!rep.passive)
  {
    rep.diagnostic = "minimal Riccati solution is not positive semidefinite";
  }
  else if (eps > 0.0)
  {
    rep.diagnostic = "decided with artificial feedthrough " + std::to_string(eps);
  }
  return rep;
}

}  // namespace phem
