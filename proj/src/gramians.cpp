// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include "phem/gramians.hpp"

#include <algorithm>
#include <cmath>
#include "phem/error.hpp"
#include "phem/structure.hpp"

namespace phem
{

namespace
{

// Below this fraction of the two self terms the trace formula is dominated by rounding, and
// the distance is recomputed on the deflated joint system.
constexpr double kCancellationRatio = 1e-6;
constexpr double kDeflationTol = 1e-10;

void require_stable(const Matrix &A, const char *who)
{
  if (A.rows() > 0 && !(spectral_abscissa(A) < 0.0))
  {
    throw Error(ErrorKind::Unstable, std::string(who) + " is not asymptotically stable");
  }
}

Matrix blkdiag(const Matrix &X, const Matrix &Y)
{
  Matrix M = Matrix::Zero(X.rows() + Y.rows(), X.cols() + Y.cols());
  M.topLeftCorner(X.rows(), X.cols()) = X;
  M.bottomRightCorner(Y.rows(), Y.cols()) = Y;
  return M;
}

Matrix vstack(const Matrix &X, const Matrix &Y)
{
  Matrix M(X.rows() + Y.rows(), X.cols());
  M << X, Y;
  return M;
}

double trace_prod(const Matrix &X, const Matrix &Y)
{
  // tr(X Y) without forming the product
  return X.cwiseProduct(Y.transpose()).sum();
}

// Orthonormal basis of the controllable subspace of (A, B) at a tolerance relative to the
// data scale.
Matrix controllable_basis(const Matrix &A, const Matrix &B)
{
  const double scale = std::max({A.norm(), B.norm(), 1e-300});
  const Staircase st = controllable_staircase(A, B, kDeflationTol * scale);
  return st.V.leftCols(st.dim_controllable);
}

double joint_linear_norm2(const Matrix &Ae, const Matrix &Be, const Matrix &Ce)
{
  const Matrix K = controllable_basis(Ae, Be);
  if (K.cols() == 0)
  {
    return 0.0;
  }
  const Matrix Aw = K.transpose() * Ae * K;
  const Matrix Bw = K.transpose() * Be;
  const Matrix Cw = Ce * K;
  const Matrix Pw = solve_lyapunov(Aw, Bw * Bw.transpose()).X;
  return trace_prod(Cw * Pw, Cw.transpose());
}

double joint_quadratic_norm2(const Matrix &Ae, const Matrix &Be, const Matrix &Qe)
{
  const Matrix K = controllable_basis(Ae, Be);
  if (K.cols() == 0)
  {
    return 0.0;
  }
  const Matrix Aw = K.transpose() * Ae * K;
  const Matrix Bw = K.transpose() * Be;
  const Matrix Qw = K.transpose() * Qe * K;
  const Matrix Pw = solve_lyapunov(Aw, Bw * Bw.transpose()).X;
  const Matrix PQ = Pw * Qw;
  return 0.25 * trace_prod(PQ, PQ);
}

double clamp_sqrt(double d2)
{
  return std::sqrt(std::max(d2, 0.0));
}

void require_same_inputs(const Matrix &B, const Matrix &Br)
{
  if (B.cols() != Br.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, "systems have different numbers of inputs");
  }
}

}  // namespace

GramianSet gramians(const LtiSystem &sys)
{
  require_stable(sys.A, "A");
  GramianSet g;
  g.P_ctrl = solve_lyapunov(sys.A, sys.B * sys.B.transpose()).X;
  g.O_obs = solve_lyapunov(sys.A.transpose(), sys.C.transpose() * sys.C).X;
  return g;
}

Matrix qo_obs_gramian(const LtiqoSystem &sys, const MatrixRef &P_ctrl)
{
  require_stable(sys.A, "A");
  if (P_ctrl.rows() != sys.n() || P_ctrl.cols() != sys.n())
  {
    throw Error(ErrorKind::DimensionMismatch, "controllability Gramian has wrong size");
  }
  const Matrix M = 0.25 * sys.Qout * P_ctrl * sys.Qout;
  return solve_lyapunov(sys.A.transpose(), symmetrize(M)).X;
}

CrossGramians cross_gramians(const LtiSystem &fom, const LtiSystem &rom)
{
  require_stable(fom.A, "full-order A");
  require_stable(rom.A, "reduced A");
  require_same_inputs(fom.B, rom.B);
  if (fom.p() != rom.p())
  {
    throw Error(ErrorKind::DimensionMismatch, "systems have different numbers of outputs");
  }
  CrossGramians cg;
  cg.Y = solve_sylvester(fom.A, rom.A.transpose(), fom.B * rom.B.transpose()).X;
  cg.Z = solve_sylvester(fom.A.transpose(), rom.A, fom.C.transpose() * rom.C).X;
  return cg;
}

double h2_norm_lti(const LtiSystem &sys)
{
  if (sys.D.size() > 0 && sys.D.cwiseAbs().maxCoeff() != 0.0)
  {
    throw Error(ErrorKind::NonzeroFeedthrough, "the H2 norm is infinite for nonzero D");
  }
  return h2_norm_strictly_proper(sys);
}

double h2_norm_strictly_proper(const LtiSystem &sys)
{
  require_stable(sys.A, "A");
  const Matrix P = solve_lyapunov(sys.A, sys.B * sys.B.transpose()).X;
  return clamp_sqrt(trace_prod(sys.C * P, sys.C.transpose()));
}

double h2_norm_ltiqo(const LtiqoSystem &sys)
{
  require_stable(sys.A, "A");
  const Matrix P = solve_lyapunov(sys.A, sys.B * sys.B.transpose()).X;
  const Matrix PQ = P * sys.Qout;
  return clamp_sqrt(0.25 * trace_prod(PQ, PQ));
}

double h2_dist_lti(const LtiSystem &fom, const LtiSystem &rom)
{
  require_stable(fom.A, "full-order A");
  require_stable(rom.A, "reduced A");
  require_same_inputs(fom.B, rom.B);
  if (fom.p() != rom.p())
  {
    throw Error(ErrorKind::DimensionMismatch, "systems have different numbers of outputs");
  }
  const double dscale = std::max(
      {1.0, fom.D.size() > 0 ? fom.D.cwiseAbs().maxCoeff() : 0.0,
       rom.D.size() > 0 ? rom.D.cwiseAbs().maxCoeff() : 0.0});
  if (fom.D.size() > 0 && (fom.D - rom.D).cwiseAbs().maxCoeff() > 1e-12 * dscale)
  {
    throw Error(ErrorKind::FeedthroughMismatch, "feedthrough matrices differ");
  }

  const Matrix P = solve_lyapunov(fom.A, fom.B * fom.B.transpose()).X;
  const Matrix Pr = solve_lyapunov(rom.A, rom.B * rom.B.transpose()).X;
  const Matrix Y = solve_sylvester(fom.A, rom.A.transpose(), fom.B * rom.B.transpose()).X;
  const double t1 = trace_prod(fom.C * P, fom.C.transpose());
  const double t2 = trace_prod(rom.C * Pr, rom.C.transpose());
  const double t3 = 2.0 * trace_prod(fom.C * Y, rom.C.transpose());
  double d2 = t1 + t2 - t3;
  if (d2 <= kCancellationRatio * (t1 + t2))
  {
    Matrix Ce(fom.p(), fom.n() + rom.n());
    Ce << fom.C, -rom.C;
    d2 = joint_linear_norm2(blkdiag(fom.A, rom.A), vstack(fom.B, rom.B), Ce);
  }
  return clamp_sqrt(d2);
}

double h2_dist_ltiqo(const LtiqoSystem &fom, const LtiqoSystem &rom)
{
  require_stable(fom.A, "full-order A");
  require_stable(rom.A, "reduced A");
  require_same_inputs(fom.B, rom.B);

  const Matrix P = solve_lyapunov(fom.A, fom.B * fom.B.transpose()).X;
  const Matrix Pr = solve_lyapunov(rom.A, rom.B * rom.B.transpose()).X;
  const Matrix Y = solve_sylvester(fom.A, rom.A.transpose(), fom.B * rom.B.transpose()).X;
  const Matrix PQ = P * fom.Qout;
  const Matrix PrQr = Pr * rom.Qout;
  const double t1 = 0.25 * trace_prod(PQ, PQ);
  const double t2 = 0.25 * trace_prod(PrQr, PrQr);
  const double t3 = 0.5 * trace_prod(Y.transpose() * fom.Qout * Y, rom.Qout);
  double d2 = t1 + t2 - t3;
  if (d2 <= kCancellationRatio * (t1 + t2))
  {
    d2 = joint_quadratic_norm2(blkdiag(fom.A, rom.A), vstack(fom.B, rom.B),
                               blkdiag(fom.Qout, -rom.Qout));
  }
  return clamp_sqrt(d2);
}

double h2_dist_ltiqo_joint(const LtiqoSystem &fom, const LtiqoSystem &rom)
{
  require_same_inputs(fom.B, rom.B);
  const LtiqoSystem joint(blkdiag(fom.A, rom.A), vstack(fom.B, rom.B),
                          blkdiag(fom.Qout, -rom.Qout));
  return h2_norm_ltiqo(joint);
}

double h2_dist_extended(const ExtendedPhSystem &fom, const ExtendedPhSystem &rom)
{
  const ExtendedPhSystem f = remove_unobservable_hamiltonian(fom, kDefaultStructureTol);
  const ExtendedPhSystem r = remove_unobservable_hamiltonian(rom, kDefaultStructureTol);
  const double dio = h2_dist_lti(f.io(), r.io());
  const double dham = h2_dist_ltiqo(f.ham(), r.ham());
  return std::hypot(dio, dham);
}

double h2_norm_extended(const ExtendedPhSystem &sys)
{
  const ExtendedPhSystem s = remove_unobservable_hamiltonian(sys, kDefaultStructureTol);
  return std::hypot(h2_norm_strictly_proper(s.io()), h2_norm_ltiqo(s.ham()));
}

}  // namespace phem
