// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include "phem/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include "phem/error.hpp"
#include "phem/kyp.hpp"

namespace phem
{

namespace
{

using Complex = std::complex<double>;

Matrix psd_factor(const Matrix &X)
{
  Eigen::LLT<Matrix> llt(symmetrize(X));
  if (llt.info() == Eigen::Success)
  {
    return llt.matrixL();
  }
  const SymEig e = sym_eig(symmetrize(X));
  return e.vectors * e.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

// Flips state signs so that the largest entry (in magnitude) of each row of B is positive.
void normalize_signs(Matrix &T, Matrix &W, const Matrix &Br)
{
  for (Eigen::Index i = 0; i < Br.rows(); ++i)
  {
    Eigen::Index j = 0;
    Br.row(i).cwiseAbs().maxCoeff(&j);
    if (Br(i, j) < 0.0)
    {
      T.col(i) *= -1.0;
      W.col(i) *= -1.0;
    }
  }
}

bool less_complex(const Complex &a, const Complex &b)
{
  if (a.real() != b.real())
  {
    return a.real() < b.real();
  }
  return a.imag() < b.imag();
}

ComplexVector sorted(const ComplexVector &v)
{
  std::vector<Complex> tmp(v.data(), v.data() + v.size());
  std::sort(tmp.begin(), tmp.end(), less_complex);
  ComplexVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    out(i) = tmp[static_cast<std::size_t>(i)];
  }
  return out;
}

// Realified tangential rational Krylov basis. Each conjugate pair contributes the real and
// imaginary part of one solve.
Matrix krylov_basis(const Matrix &A, const Matrix &B, const ComplexVector &shifts,
                    const ComplexMatrix &tangents)
{
  const Eigen::Index n = A.rows();
  const Eigen::Index r = shifts.size();
  Matrix V(n, r);
  const double scale = std::max(1.0, A.norm());
  const double imag_tol = 1e-12 * scale;
  std::vector<bool> used(static_cast<std::size_t>(r), false);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < r; ++i)
  {
    if (used[static_cast<std::size_t>(i)])
    {
      continue;
    }
    used[static_cast<std::size_t>(i)] = true;
    const Complex s = shifts(i);
    ComplexMatrix M = -A.cast<Complex>();
    M.diagonal().array() += s;
    Eigen::PartialPivLU<ComplexMatrix> lu(M);
    if (!(lu.rcond() > 1e-14))
    {
      throw Error(ErrorKind::ShiftSolveSingular,
                  "shifted system is singular at shift " + std::to_string(s.real()) + "+" +
                      std::to_string(s.imag()) + "i");
    }
    const ComplexVector rhs = B.cast<Complex>() * tangents.col(i);
    const ComplexVector v = lu.solve(rhs);
    if (std::abs(s.imag()) <= imag_tol || col + 1 >= r)
    {
      V.col(col++) = v.real();
      continue;
    }
    // pair partner: the closest unused shift to conj(s)
    Eigen::Index partner = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < r; ++k)
    {
      if (!used[static_cast<std::size_t>(k)] && std::abs(shifts(k) - std::conj(s)) < best)
      {
        best = std::abs(shifts(k) - std::conj(s));
        partner = k;
      }
    }
    if (partner >= 0)
    {
      used[static_cast<std::size_t>(partner)] = true;
    }
    V.col(col++) = v.real();
    V.col(col++) = v.imag();
  }
  return V.leftCols(col);
}

Matrix orthonormalize(const Matrix &V)
{
  Eigen::HouseholderQR<Matrix> qr(V);
  return qr.householderQ() * Matrix::Identity(V.rows(), V.cols());
}

}  // namespace

std::string to_string(RomMethod method)
{
  return method == RomMethod::Prbt ? "prbt" : "phirka";
}

RomMethod rom_method_from_string(const std::string &name)
{
  if (name == "prbt")
  {
    return RomMethod::Prbt;
  }
  if (name == "phirka")
  {
    return RomMethod::PhIrka;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown reduction method '" + name + "'");
}

RomResult prbt(const LtiSystem &fom_in, int r)
{
  const Eigen::Index n = fom_in.n();
  if (r < 1 || r > n)
  {
    throw Error(ErrorKind::InvalidArgument, "reduced order must lie in [1, " +
                                                std::to_string(n) + "]");
  }
  RomResult res;
  res.method = RomMethod::Prbt;

  LtiSystem fom = fom_in;
  const double dscale = std::max(1.0, fom.D.size() > 0 ? fom.D.cwiseAbs().maxCoeff() : 0.0);
  if (fom.m() > 0 && min_eigenvalue(fom.D + fom.D.transpose()) < 1e-12 * dscale)
  {
    res.feedthrough_eps = kArtificialFeedthrough;
    fom = with_feedthrough(fom, res.feedthrough_eps);
  }

  const Matrix X = solve_are_extremal(fom.A, fom.B, fom.C, fom.D, AreBranch::Min).X;
  const Matrix Y = solve_are_extremal(fom.A.transpose(), fom.C.transpose(), fom.B.transpose(),
                                      fom.D.transpose(), AreBranch::Min)
                       .X;
  const Matrix Lx = psd_factor(X);
  const Matrix Ly = psd_factor(Y);
  Eigen::JacobiSVD<Matrix> svd(Lx.transpose() * Ly, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector &sigma = svd.singularValues();
  res.characteristic_values = sigma;

  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                       (sigma.size() > 0 ? sigma(0) : 0.0);
  if (!(sigma(r - 1) > floor))
  {
    throw Error(ErrorKind::RankDeficient, "fewer than " + std::to_string(r) +
                                              " positive characteristic values");
  }

  const Vector isq = sigma.head(r).cwiseSqrt().cwiseInverse();
  Matrix T = Ly * svd.matrixV().leftCols(r) * isq.asDiagonal();
  Matrix W = Lx * svd.matrixU().leftCols(r) * isq.asDiagonal();
  normalize_signs(T, W, W.transpose() * fom.B);

  LtiSystem rom(W.transpose() * fom.A * T, W.transpose() * fom.B, fom.C * T, fom.D);
  const Matrix Xr = solve_are_extremal(rom.A, rom.B, rom.C, rom.D, AreBranch::Min).X;
  res.rom_ph = ExtendedPhSystem(lti_to_ph(rom, Xr));
  res.rom_lti = std::move(rom);
  return res;
}

RomResult phirka(const ExtendedPhSystem &fom, int r, const PhIrkaOptions &opts)
{
  const PhSystem &ph = fom.ph;
  const Eigen::Index n = ph.n();
  const Eigen::Index m = ph.m();
  if (r < 1 || r > n)
  {
    throw Error(ErrorKind::InvalidArgument, "reduced order must lie in [1, " +
                                                std::to_string(n) + "]");
  }
  if (m == 0)
  {
    throw Error(ErrorKind::InvalidArgument, "interpolation needs at least one input");
  }
  Eigen::LLT<Matrix> qchk(symmetrize(ph.Q));
  if (qchk.info() != Eigen::Success)
  {
    throw Error(ErrorKind::NotPositiveDefinite, "Hamiltonian Hessian is not positive definite");
  }

  const Matrix A = (ph.J - ph.R) * ph.Q;
  const Matrix B = ph.G - ph.P;

  ComplexVector shifts;
  ComplexMatrix tangents;
  if (opts.initial_shifts)
  {
    shifts = *opts.initial_shifts;
    if (shifts.size() != r)
    {
      throw Error(ErrorKind::DimensionMismatch, "need exactly r initial shifts");
    }
  }
  else
  {
    const ComplexVector ev = A.eigenvalues();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
    {
      const double a = std::abs(ev(i));
      if (a > 0.0)
      {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
      }
    }
    if (!(hi > 0.0))
    {
      lo = hi = 1.0;
    }
    shifts.resize(r);
    for (Eigen::Index i = 0; i < r; ++i)
    {
      const double t = r == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(r - 1);
      shifts(i) = Complex(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))), 0.0);
    }
  }
  if (opts.initial_tangents)
  {
    tangents = *opts.initial_tangents;
    if (tangents.rows() != m || tangents.cols() != r)
    {
      throw Error(ErrorKind::DimensionMismatch, "initial tangents must be m x r");
    }
  }
  else
  {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    tangents.resize(m, r);
    for (Eigen::Index j = 0; j < r; ++j)
    {
      Vector b(m);
      for (Eigen::Index i = 0; i < m; ++i)
      {
        b(i) = normal(rng);
      }
      b /= std::max(b.norm(), 1e-300);
      tangents.col(j) = b.cast<Complex>();
    }
  }

  RomResult res;
  res.method = RomMethod::PhIrka;
  res.converged = false;
  std::vector<ComplexVector> history;
  history.push_back(shifts);

  PhSystem rom;
  int it = 0;
  for (;;)
  {
    Matrix V = orthonormalize(krylov_basis(A, B, shifts, tangents));
    Matrix QV = ph.Q * V;
    Eigen::LLT<Matrix> llt(symmetrize(V.transpose() * QV));
    if (llt.info() != Eigen::Success)
    {
      Eigen::JacobiSVD<Matrix> svd(V, Eigen::ComputeThinU);
      V = svd.matrixU();
      QV = ph.Q * V;
      llt.compute(symmetrize(V.transpose() * QV));
      if (llt.info() != Eigen::Success)
      {
        throw Error(ErrorKind::NotPositiveDefinite, "projected Hamiltonian Hessian is singular");
      }
    }
    const Matrix W = llt.solve(QV.transpose()).transpose();
    rom = project_ph(ph, V, W);
    ++it;

    const Matrix Ar = (rom.J - rom.R) * rom.Q;
    const Matrix Br = rom.G - rom.P;
    Eigen::EigenSolver<Matrix> es(Ar);
    const ComplexVector lam = es.eigenvalues();
    const ComplexMatrix X = es.eigenvectors();
    const ComplexMatrix tang = X.partialPivLu().solve(Br.cast<Complex>()).transpose();

    ComplexVector next = -lam;
    const ComplexVector a = sorted(next), b = sorted(shifts);
    const double change = (a - b).norm() / std::max(a.norm(), 1e-300);
    shifts = next;
    tangents = tang;
    history.push_back(shifts);
    if (change < opts.shift_tol)
    {
      res.converged = true;
      break;
    }
    if (it >= opts.max_iter)
    {
      break;
    }
  }

  res.iterations = it;
  res.shift_history = std::move(history);
  res.rom_lti = ph_to_lti(rom);
  res.rom_ph = ExtendedPhSystem(std::move(rom));
  return res;
}

}  // namespace phem
