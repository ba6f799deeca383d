// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include "phem/numkernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include "phem/error.hpp"

// Ordered real Schur and QZ decompositions and the quasi-triangular Sylvester solver come from
// LAPACK; Eigen has neither eigenvalue reordering nor a dtrsyl equivalent.
extern "C"
{
  using lapack_select2 = int (*)(const double *, const double *);
  void dgees_(const char *jobvs, const char *sort, lapack_select2 select, const int *n,
              double *a, const int *lda, int *sdim, double *wr, double *wi, double *vs,
              const int *ldvs, double *work, const int *lwork, int *bwork, int *info);
  using lapack_select3 = int (*)(const double *, const double *, const double *);
  void dgges_(const char *jobvsl, const char *jobvsr, const char *sort, lapack_select3 selctg,
              const int *n, double *a, const int *lda, double *b, const int *ldb, int *sdim,
              double *alphar, double *alphai, double *beta, double *vsl, const int *ldvsl,
              double *vsr, const int *ldvsr, double *work, const int *lwork, int *bwork,
              int *info);
  void dtrsyl_(const char *trana, const char *tranb, const int *isgn, const int *m,
               const int *n, const double *a, const int *lda, const double *b, const int *ldb,
               double *c, const int *ldc, double *scale, int *info);
}

namespace phem
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::DimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::SingularPencil:
      return "SingularPencil";
    case ErrorKind::FeedthroughSingular:
      return "FeedthroughSingular";
    case ErrorKind::NoStableInvariantSubspace:
      return "NoStableInvariantSubspace";
    case ErrorKind::IndefiniteSolution:
      return "IndefiniteSolution";
    case ErrorKind::NotFeasible:
      return "NotFeasible";
    case ErrorKind::NotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorKind::SingularShift:
      return "SingularShift";
    case ErrorKind::StepFactorizationFailed:
      return "StepFactorizationFailed";
    case ErrorKind::Unstable:
      return "Unstable";
    case ErrorKind::NonzeroFeedthrough:
      return "NonzeroFeedthrough";
    case ErrorKind::FeedthroughMismatch:
      return "FeedthroughMismatch";
    case ErrorKind::RankDeficient:
      return "RankDeficient";
    case ErrorKind::ShiftSolveSingular:
      return "ShiftSolveSingular";
    case ErrorKind::NotInInterior:
      return "NotInInterior";
    case ErrorKind::NoInteriorPoint:
      return "NoInteriorPoint";
    case ErrorKind::ParseError:
      return "ParseError";
    case ErrorKind::IoError:
      return "IoError";
    case ErrorKind::InvalidArgument:
      return "InvalidArgument";
  }
  return "Unknown";
}

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

int select_stable(const double *wr, const double *) { return *wr < 0.0 ? 1 : 0; }
int select_antistable(const double *wr, const double *) { return *wr > 0.0 ? 1 : 0; }
// dgges returns beta >= 0; beta == 0 is an infinite eigenvalue and never selected
int select_stable_pencil(const double *ar, const double *, const double *beta)
{
  return *beta > 0.0 && *ar < 0.0 ? 1 : 0;
}
int select_antistable_pencil(const double *ar, const double *, const double *beta)
{
  return *beta > 0.0 && *ar > 0.0 ? 1 : 0;
}

enum class SchurOrder
{
  None,
  StableFirst,
  AntistableFirst,
};

struct RealSchur
{
  Matrix T;
  Matrix Z;
  ComplexVector eigenvalues;
  int sdim = 0;
};

RealSchur real_schur(const MatrixRef &M, SchurOrder order)
{
  const int n = static_cast<int>(M.rows());
  RealSchur out;
  out.T = M;
  out.Z.resize(n, n);
  out.eigenvalues.resize(n);
  if (n == 0)
  {
    return out;
  }
  Vector wr(n), wi(n);
  std::vector<int> bwork(n);
  const char jobvs = 'V';
  const char sort = order == SchurOrder::None ? 'N' : 'S';
  lapack_select2 select = order == SchurOrder::AntistableFirst ? select_antistable : select_stable;
  int info = 0;
  int lwork = -1;
  double query = 0.0;
  dgees_(&jobvs, &sort, select, &n, out.T.data(), &n, &out.sdim, wr.data(), wi.data(),
         out.Z.data(), &n, &query, &lwork, bwork.data(), &info);
  lwork = std::max(1, static_cast<int>(query));
  std::vector<double> work(lwork);
  dgees_(&jobvs, &sort, select, &n, out.T.data(), &n, &out.sdim, wr.data(), wi.data(),
         out.Z.data(), &n, work.data(), &lwork, bwork.data(), &info);
  if (info != 0 && info != n + 2)
  {
    throw Error(ErrorKind::SingularPencil,
                "real Schur decomposition failed (dgees info " + std::to_string(info) + ")");
  }
  for (int i = 0; i < n; ++i)
  {
    out.eigenvalues(i) = {wr(i), wi(i)};
  }
  return out;
}

std::string format_complex(std::complex<double> z)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e%+.3ei", z.real(), z.imag());
  return buf;
}

struct OrderedQz
{
  Matrix Z;  // right Schur vectors, leading sdim columns span the selected subspace
  ComplexVector eigenvalues;  // alpha / beta, infinite ones as +inf
  int sdim = 0;
};

OrderedQz ordered_qz(const MatrixRef &M, const MatrixRef &N, SchurOrder order)
{
  const int n = static_cast<int>(M.rows());
  OrderedQz out;
  Matrix S = M, T = N;
  Matrix Ql(n, n);
  out.Z.resize(n, n);
  out.eigenvalues.resize(n);
  if (n == 0)
  {
    return out;
  }
  Vector ar(n), ai(n), be(n);
  std::vector<int> bwork(n);
  lapack_select3 select =
      order == SchurOrder::AntistableFirst ? select_antistable_pencil : select_stable_pencil;
  int info = 0;
  int lwork = -1;
  double query = 0.0;
  dgges_("V", "V", "S", select, &n, S.data(), &n, T.data(), &n, &out.sdim, ar.data(), ai.data(),
         be.data(), Ql.data(), &n, out.Z.data(), &n, &query, &lwork, bwork.data(), &info);
  lwork = std::max(8 * n + 16, static_cast<int>(query));
  std::vector<double> work(lwork);
  dgges_("V", "V", "S", select, &n, S.data(), &n, T.data(), &n, &out.sdim, ar.data(), ai.data(),
         be.data(), Ql.data(), &n, out.Z.data(), &n, work.data(), &lwork, bwork.data(), &info);
  if (info != 0 && info != n + 2)
  {
    throw Error(ErrorKind::SingularPencil,
                "ordered QZ decomposition failed (dgges info " + std::to_string(info) + ")");
  }
  for (int i = 0; i < n; ++i)
  {
    if (be(i) == 0.0)
    {
      out.eigenvalues(i) = {std::numeric_limits<double>::infinity(), 0.0};
    }
    else
    {
      out.eigenvalues(i) = {ar(i) / be(i), ai(i) / be(i)};
    }
  }
  return out;
}

double norm2(const MatrixRef &M)
{
  if (M.size() == 0)
  {
    return 0.0;
  }
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

// Bartels-Stewart core: A Y + Y F + M = 0 with precomputed Schur forms.
MatrixSolution sylvester_from_schur(const MatrixRef &A, const RealSchur &sa, const MatrixRef &F,
                                    const RealSchur &sf, const MatrixRef &M)
{
  const int n = static_cast<int>(A.rows());
  const int k = static_cast<int>(F.rows());
  MatrixSolution out;
  if (n == 0 || k == 0)
  {
    out.X = Matrix::Zero(n, k);
    return out;
  }
  const double scale_af = A.norm() + F.norm();
  double min_sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < k; ++j)
    {
      min_sep = std::min(min_sep, std::abs(sa.eigenvalues(i) + sf.eigenvalues(j)));
    }
  }
  if (min_sep <= 100.0 * kEps * std::max(scale_af, 1e-300))
  {
    throw Error(ErrorKind::SingularPencil,
                "spectra of A and -F (nearly) intersect; minimum |lambda + mu| = " +
                  std::to_string(min_sep));
  }

  Matrix C = -(sa.Z.transpose() * M * sf.Z);
  const char no = 'N';
  const int isgn = 1;
  double scale = 1.0;
  int info = 0;
  dtrsyl_(&no, &no, &isgn, &n, &k, sa.T.data(), &n, sf.T.data(), &k, C.data(), &n, &scale,
          &info);
  if (info < 0)
  {
    throw Error(ErrorKind::InvalidArgument, "dtrsyl rejected its arguments");
  }
  if (info == 1)
  {
    throw Error(ErrorKind::SingularPencil, "Sylvester operator is (nearly) singular");
  }
  out.X = sa.Z * (C / scale) * sf.Z.transpose();

  const Matrix residual = A * out.X + out.X * F + M;
  const double denom = (A.norm() + F.norm()) * out.X.norm() + M.norm();
  out.report.residual_rel = denom > 0.0 ? residual.norm() / denom : 0.0;
  out.report.condition_estimate = scale_af / min_sep;
  return out;
}

void require_square(const MatrixRef &M, const char *name)
{
  if (M.rows() != M.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, std::string(name) + " must be square");
  }
}

}  // namespace

Matrix symmetrize(const MatrixRef &M) { return 0.5 * (M + M.transpose()); }

double spectral_abscissa(const MatrixRef &A)
{
  if (A.size() == 0)
  {
    return -std::numeric_limits<double>::infinity();
  }
  Eigen::EigenSolver<Matrix> es(A, false);
  return es.eigenvalues().real().maxCoeff();
}

double min_eigenvalue(const MatrixRef &S)
{
  if (S.size() == 0)
  {
    return std::numeric_limits<double>::infinity();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

MatrixSolution solve_sylvester(const MatrixRef &A, const MatrixRef &F, const MatrixRef &M)
{
  require_square(A, "A");
  require_square(F, "F");
  if (M.rows() != A.rows() || M.cols() != F.rows())
  {
    throw Error(ErrorKind::DimensionMismatch, "M must be rows(A) x rows(F)");
  }
  const RealSchur sa = real_schur(A, SchurOrder::None);
  const RealSchur sf = real_schur(F, SchurOrder::None);
  return sylvester_from_schur(A, sa, F, sf, M);
}

MatrixSolution solve_lyapunov(const MatrixRef &A, const MatrixRef &M)
{
  require_square(A, "A");
  if (M.rows() != A.rows() || M.cols() != A.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, "M must have the shape of A");
  }
  const RealSchur sa = real_schur(A, SchurOrder::None);
  // A^T = Z T^T Z^T, so the transformed equation is T X + X T^T = -Z^T M Z.
  const int n = static_cast<int>(A.rows());
  MatrixSolution out;
  if (n == 0)
  {
    out.X = Matrix::Zero(0, 0);
    return out;
  }
  double min_sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
  {
    for (int j = i; j < n; ++j)
    {
      min_sep = std::min(min_sep, std::abs(sa.eigenvalues(i) + sa.eigenvalues(j)));
    }
  }
  const double scale_a = 2.0 * A.norm();
  if (min_sep <= 100.0 * kEps * std::max(scale_a, 1e-300))
  {
    throw Error(ErrorKind::SingularPencil,
                "A has eigenvalues with lambda_i + lambda_j ~ 0; minimum |lambda_i + lambda_j| = " +
                  std::to_string(min_sep));
  }
  Matrix C = -(sa.Z.transpose() * symmetrize(M) * sa.Z);
  const char no = 'N';
  const char tr = 'T';
  const int isgn = 1;
  double scale = 1.0;
  int info = 0;
  dtrsyl_(&no, &tr, &isgn, &n, &n, sa.T.data(), &n, sa.T.data(), &n, C.data(), &n, &scale,
          &info);
  if (info == 1)
  {
    throw Error(ErrorKind::SingularPencil, "Lyapunov operator is (nearly) singular");
  }
  out.X = symmetrize(sa.Z * (C / scale) * sa.Z.transpose());
  const Matrix residual = A * out.X + out.X * A.transpose() + M;
  const double denom = scale_a * out.X.norm() + M.norm();
  out.report.residual_rel = denom > 0.0 ? residual.norm() / denom : 0.0;
  out.report.condition_estimate = scale_a / min_sep;
  return out;
}

AreSolution solve_are_extremal(const MatrixRef &A, const MatrixRef &B, const MatrixRef &C,
                               const MatrixRef &D, AreBranch which, double shift)
{
  require_square(A, "A");
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (B.rows() != n || C.cols() != n || C.rows() != m || D.rows() != m || D.cols() != m)
  {
    throw Error(ErrorKind::DimensionMismatch,
                "passivity ARE needs A n x n, B n x m, C m x n, D m x m");
  }
  const Matrix Rf = D + D.transpose();
  Eigen::FullPivLU<Matrix> rlu(Rf);
  if (m > 0 && (!rlu.isInvertible() || rlu.rcond() < 1e3 * kEps))
  {
    throw Error(ErrorKind::FeedthroughSingular, "D + D^T is (numerically) singular");
  }
  const Matrix RinvC = m > 0 ? Matrix(rlu.solve(C)) : Matrix::Zero(0, n);
  const Matrix RinvBt = m > 0 ? Matrix(rlu.solve(B.transpose())) : Matrix::Zero(0, n);
  const Matrix Qc = symmetrize(C.transpose() * RinvC);

  // Extended pencil  lambda diag(I, I, 0) - [[A, 0, B], [-s I, -A^T, C^T], [-C, B^T, -Rf]],
  // compressed to order 2n by the orthogonal complement of its last block column. Working with
  // the pencil avoids forming Rf^{-1}, which is badly conditioned for the small artificial
  // feedthroughs used to regularize passive systems.
  Matrix Mfull = Matrix::Zero(2 * n + m, 2 * n);
  Mfull.topLeftCorner(n, n) = A;
  Mfull.block(n, 0, n, n) = -shift * Matrix::Identity(n, n);
  Mfull.block(n, n, n, n) = -A.transpose();
  Mfull.bottomLeftCorner(m, n) = -C;
  Mfull.bottomRightCorner(m, n) = B.transpose();
  Matrix Nfull = Matrix::Zero(2 * n + m, 2 * n);
  Nfull.topRows(2 * n).setIdentity();
  Matrix last(2 * n + m, m);
  last << B, C.transpose(), -Rf;
  Eigen::HouseholderQR<Matrix> qr(last);
  const Matrix Qfull = qr.householderQ() * Matrix::Identity(2 * n + m, 2 * n + m);
  const Matrix Wc = Qfull.rightCols(2 * n);
  const OrderedQz qz =
      ordered_qz(Wc.transpose() * Mfull, Wc.transpose() * Nfull,
                 which == AreBranch::Min ? SchurOrder::StableFirst : SchurOrder::AntistableFirst);

  const double pscale = std::max({A.norm(), B.norm(), C.norm(), Rf.norm(), 1e-300});
  for (Eigen::Index i = 0; i < qz.eigenvalues.size(); ++i)
  {
    if (std::abs(qz.eigenvalues(i).real()) < 1e2 * kEps * pscale)
    {
      throw Error(ErrorKind::NoStableInvariantSubspace,
                  "Hamiltonian pencil has eigenvalues on the imaginary axis (" +
                    format_complex(qz.eigenvalues(i)) + ")");
    }
  }
  if (qz.sdim != n)
  {
    throw Error(ErrorKind::NoStableInvariantSubspace,
                "selected deflating subspace has dimension " + std::to_string(qz.sdim) +
                  " instead of " + std::to_string(n));
  }

  AreSolution out;
  if (n == 0)
  {
    out.X = Matrix::Zero(0, 0);
    return out;
  }
  const Matrix U1 = qz.Z.topLeftCorner(n, n);
  const Matrix U2 = qz.Z.bottomLeftCorner(n, n);
  Eigen::FullPivLU<Matrix> ulu(U1.transpose());
  if (!ulu.isInvertible() || ulu.rcond() < 1e2 * kEps)
  {
    throw Error(ErrorKind::NoStableInvariantSubspace,
                "deflating subspace is not a graph subspace (U1 singular)");
  }
  Matrix X = symmetrize(ulu.solve(U2.transpose()).transpose());

  auto residual_of = [&](const Matrix &Xc) {
    const Matrix K = RinvBt * Xc - RinvC;  // (D+D^T)^{-1}(B^T X - C)
    return Matrix(A.transpose() * Xc + Xc * A + (Xc * B - C.transpose()) * K +
                  shift * Matrix::Identity(n, n));
  };
  auto scale_of = [&](const Matrix &Xc) {
    const Matrix XB = Xc * B;
    return 2.0 * (A.transpose() * Xc).norm() + Qc.norm() + 2.0 * (XB * RinvC).norm() +
           (XB * RinvBt * Xc).norm() + std::abs(shift) * std::sqrt(static_cast<double>(n));
  };

  // A Newton step on the closed loop cleans up rounding from the subspace solve; it is kept
  // only if it lowers the residual.
  Matrix res = residual_of(X);
  double rel = res.norm() / std::max(scale_of(X), 1e-300);
  for (int step = 0; step < 2 && rel > 1e-14; ++step)
  {
    const Matrix Acl = A + B * (RinvBt * X - RinvC);
    try
    {
      const MatrixSolution dx = solve_lyapunov(Acl.transpose(), res);
      const Matrix Xn = symmetrize(X + dx.X);
      const Matrix resn = residual_of(Xn);
      const double reln = resn.norm() / std::max(scale_of(Xn), 1e-300);
      if (!(reln < rel))
      {
        break;
      }
      X = Xn;
      res = resn;
      rel = reln;
    }
    catch (const Error &)
    {
      break;
    }
  }

  out.X = X;
  out.residual_rel = rel;
  const Matrix Acl = A + B * (RinvBt * X - RinvC);
  out.closed_loop_eigenvalues = Eigen::EigenSolver<Matrix>(Acl, false).eigenvalues();

  if (which == AreBranch::Min)
  {
    const double lmin = min_eigenvalue(X);
    if (lmin < -1e-8 * std::max(1.0, X.norm()))
    {
      throw Error(ErrorKind::IndefiniteSolution,
                  "stabilizing ARE solution is indefinite (min eigenvalue " +
                    std::to_string(lmin) + "); the system is not passive");
    }
  }
  return out;
}

SymEig sym_eig(const MatrixRef &S)
{
  require_square(S, "S");
  SymEig out;
  if (S.size() == 0)
  {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S));
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

double default_rank_tol(const MatrixRef &M)
{
  return static_cast<double>(std::max(M.rows(), M.cols())) * kEps * norm2(M);
}

Staircase controllable_staircase(const MatrixRef &A, const MatrixRef &B, double tol)
{
  require_square(A, "A");
  const Eigen::Index n = A.rows();
  if (B.rows() != n)
  {
    throw Error(ErrorKind::DimensionMismatch, "B must have rows(A) rows");
  }
  if (!(tol > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "staircase tolerance must be positive");
  }
  Staircase out;
  out.V = Matrix::Identity(n, n);
  Matrix Ak = A;
  Matrix Bk = B;
  Eigen::Index done = 0;
  Eigen::Index prev_start = 0;
  Eigen::Index prev_size = 0;
  double discarded = 0.0;
  while (done < n)
  {
    const Eigen::Index rows = n - done;
    const Matrix block = done == 0 ? Matrix(Bk.bottomRows(rows))
                                   : Matrix(Ak.block(done, prev_start, rows, prev_size));
    if (block.cols() == 0)
    {
      break;
    }
    Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeFullU);
    const Vector &s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > tol)
    {
      ++rank;
    }
    const Matrix &U = svd.matrixU();
    Ak.bottomRows(rows) = U.transpose() * Ak.bottomRows(rows);
    Ak.rightCols(rows) = Ak.rightCols(rows) * U;
    Bk.bottomRows(rows) = U.transpose() * Bk.bottomRows(rows);
    out.V.rightCols(rows) = out.V.rightCols(rows) * U;
    if (rank == 0)
    {
      break;
    }
    out.block_sizes.push_back(static_cast<int>(rank));
    prev_start = done;
    prev_size = rank;
    done += rank;
  }
  out.dim_controllable = static_cast<int>(done);
  if (done < n)
  {
    discarded = std::hypot(Ak.bottomLeftCorner(n - done, done).norm(),
                           Bk.bottomRows(n - done).norm());
  }
  out.zero_block_norm = discarded;
  return out;
}

Matrix orthogonal_complement(const MatrixRef &U)
{
  const Eigen::Index n = U.rows();
  const Eigen::Index k = U.cols();
  if (k == 0)
  {
    return Matrix::Identity(n, n);
  }
  Eigen::HouseholderQR<Matrix> qr(U);
  const Matrix Qfull = qr.householderQ() * Matrix::Identity(n, n);
  return Qfull.rightCols(n - k);
}

Matrix subspace_intersection(const MatrixRef &U1, const MatrixRef &U2, double tol)
{
  const Eigen::Index n = U1.rows();
  if (U1.cols() == 0 || U2.cols() == 0)
  {
    return Matrix::Zero(n, 0);
  }
  // sines of the principal angles are the singular values of (I - U2 U2^T) U1
  const Matrix residual = U1 - U2 * (U2.transpose() * U1);
  Eigen::JacobiSVD<Matrix> svd(residual, Eigen::ComputeFullV);
  const Vector &s = svd.singularValues();
  const Matrix &V = svd.matrixV();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < V.cols(); ++i)
  {
    const double sine = i < s.size() ? s(i) : 0.0;
    if (sine <= tol)
    {
      keep.push_back(i);
    }
  }
  Matrix basis(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
  {
    basis.col(static_cast<Eigen::Index>(j)) = U1 * V.col(keep[j]);
  }
  if (basis.cols() > 0)
  {
    Eigen::HouseholderQR<Matrix> qr(basis);
    basis = qr.householderQ() * Matrix::Identity(n, basis.cols());
  }
  return basis;
}

}  // namespace phem
