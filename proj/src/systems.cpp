// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include "phem/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include "phem/error.hpp"
#include "phem/kyp.hpp"

namespace phem
{

namespace
{

void require(bool cond, const std::string &what)
{
  if (!cond)
  {
    throw Error(ErrorKind::DimensionMismatch, what);
  }
}

std::string dims(const Matrix &M)
{
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

double max_abs(const Matrix &M)
{
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

bool all_finite(const Matrix &M)
{
  return M.size() == 0 || M.allFinite();
}

}  // namespace

LtiSystem::LtiSystem(Matrix A_, Matrix B_, Matrix C_, Matrix D_)
  : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), D(std::move(D_))
{
  const auto n = A.rows();
  require(A.cols() == n, "A must be square, got " + dims(A));
  require(B.rows() == n, "B has " + std::to_string(B.rows()) + " rows, expected " +
                             std::to_string(n));
  require(C.cols() == n, "C has " + std::to_string(C.cols()) + " columns, expected " +
                             std::to_string(n));
  require(D.rows() == C.rows() && D.cols() == B.cols(),
          "D is " + dims(D) + ", expected " + std::to_string(C.rows()) + "x" +
              std::to_string(B.cols()));
}

PhSystem::PhSystem(Matrix J_, Matrix R_, Matrix Q_, Matrix G_, Matrix P_, Matrix S_, Matrix N_)
  : J(std::move(J_)), R(std::move(R_)), Q(std::move(Q_)), G(std::move(G_)), P(std::move(P_)),
    S(std::move(S_)), N(std::move(N_))
{
  const auto n = J.rows();
  const auto m = G.cols();
  require(J.cols() == n, "J must be square, got " + dims(J));
  require(R.rows() == n && R.cols() == n, "R is " + dims(R) + ", expected " + dims(J));
  require(Q.rows() == n && Q.cols() == n, "Q is " + dims(Q) + ", expected " + dims(J));
  require(G.rows() == n, "G has " + std::to_string(G.rows()) + " rows, expected " +
                             std::to_string(n));
  require(P.rows() == n && P.cols() == m, "P is " + dims(P) + ", expected " + dims(G));
  require(S.rows() == m && S.cols() == m, "S is " + dims(S) + ", expected " +
                                              std::to_string(m) + "x" + std::to_string(m));
  require(N.rows() == m && N.cols() == m, "N is " + dims(N) + ", expected " + dims(S));
}

Matrix PhSystem::structure_matrix() const
{
  const auto n = this->n(), m = this->m();
  Matrix Gamma(n + m, n + m);
  Gamma << J, G, -G.transpose(), N;
  return Gamma;
}

Matrix PhSystem::dissipation_matrix() const
{
  const auto n = this->n(), m = this->m();
  Matrix W(n + m, n + m);
  W << R, P, P.transpose(), S;
  return W;
}

LtiqoSystem::LtiqoSystem(Matrix A_, Matrix B_, Matrix Qout_)
  : A(std::move(A_)), B(std::move(B_)), Qout(std::move(Qout_))
{
  const auto n = A.rows();
  require(A.cols() == n, "A must be square, got " + dims(A));
  require(B.rows() == n, "B has " + std::to_string(B.rows()) + " rows, expected " +
                             std::to_string(n));
  require(Qout.rows() == n && Qout.cols() == n, "Qout is " + dims(Qout) + ", expected " +
                                                    dims(A));
}

LtiSystem ExtendedPhSystem::io() const
{
  return ph_to_lti(ph);
}

LtiqoSystem ExtendedPhSystem::ham() const
{
  return LtiqoSystem((ph.J - ph.R) * ph.Q, ph.G - ph.P, ph.Q);
}

std::string ValidationReport::to_string() const
{
  std::ostringstream os;
  if (violations.empty())
  {
    os << "valid (tol " << tol_used << ")";
    return os.str();
  }
  for (std::size_t i = 0; i < violations.size(); ++i)
  {
    if (i > 0)
    {
      os << "\n";
    }
    os << violations[i].what << " (magnitude " << violations[i].magnitude << ")";
  }
  return os.str();
}

ValidationReport validate_ph(const PhSystem &sys, double tol)
{
  // Re-run the dimension checks in case the fields were assigned directly.
  PhSystem checked(sys.J, sys.R, sys.Q, sys.G, sys.P, sys.S, sys.N);

  ValidationReport report;
  for (const Matrix *M : {&sys.J, &sys.R, &sys.Q, &sys.G, &sys.P, &sys.S, &sys.N})
  {
    if (!all_finite(*M))
    {
      report.violations.push_back({"non-finite matrix entry",
                                   std::numeric_limits<double>::infinity()});
      return report;
    }
  }

  double scale = 1.0;
  for (const Matrix *M : {&sys.J, &sys.R, &sys.Q, &sys.G, &sys.P, &sys.S, &sys.N})
  {
    scale = std::max(scale, max_abs(*M));
  }
  const double atol = tol * scale;
  report.tol_used = atol;

  const Matrix Gamma = checked.structure_matrix();
  const double skew_err = max_abs(Gamma + Gamma.transpose());
  if (skew_err > atol)
  {
    report.violations.push_back({"structure matrix not skew-symmetric", skew_err});
  }

  const Matrix W = checked.dissipation_matrix();
  const double wsym_err = max_abs(W - W.transpose());
  if (wsym_err > atol)
  {
    report.violations.push_back({"dissipation matrix not symmetric", wsym_err});
  }
  if (W.size() > 0)
  {
    const double lmin = min_eigenvalue(symmetrize(W));
    if (lmin < -atol)
    {
      report.violations.push_back({"dissipation matrix not positive semidefinite", -lmin});
    }
  }

  const double qsym_err = max_abs(sys.Q - sys.Q.transpose());
  if (qsym_err > atol)
  {
    report.violations.push_back({"Hamiltonian Hessian not symmetric", qsym_err});
  }
  if (sys.Q.size() > 0)
  {
    const double lmin = min_eigenvalue(symmetrize(sys.Q));
    if (lmin < -atol)
    {
      report.violations.push_back({"Hamiltonian Hessian not positive semidefinite", -lmin});
    }
  }
  return report;
}

LtiSystem ph_to_lti(const PhSystem &sys)
{
  return LtiSystem((sys.J - sys.R) * sys.Q, sys.G - sys.P, (sys.G + sys.P).transpose() * sys.Q,
                   sys.S - sys.N);
}

PhSystem lti_to_ph(const LtiSystem &sys, const MatrixRef &X, double tol)
{
  const auto n = sys.n(), m = sys.m();
  if (sys.p() != m)
  {
    throw Error(ErrorKind::DimensionMismatch,
                "pH form needs as many outputs as inputs, got p = " + std::to_string(sys.p()) +
                    ", m = " + std::to_string(m));
  }
  if (X.rows() != n || X.cols() != n)
  {
    throw Error(ErrorKind::DimensionMismatch, "X must be " + std::to_string(n) + "x" +
                                                  std::to_string(n));
  }
  const Feasibility f = is_feasible(sys, X, tol);
  if (!(f.min_eig_X > f.tol_X))
  {
    throw Error(ErrorKind::NotPositiveDefinite,
                "smallest eigenvalue of X is " + std::to_string(f.min_eig_X));
  }
  if (!f.feasible)
  {
    throw Error(ErrorKind::NotFeasible, "smallest eigenvalue of the KYP matrix is " +
                                            std::to_string(f.min_eig_W));
  }

  const Matrix Xs = symmetrize(X);
  Eigen::LLT<Matrix> llt(Xs);
  if (llt.info() != Eigen::Success)
  {
    throw Error(ErrorKind::NotPositiveDefinite, "Cholesky factorization of X failed");
  }
  // A X^{-1} = (X^{-1} A^T)^T
  const Matrix AXi = llt.solve(sys.A.transpose()).transpose();
  const Matrix XiCt = llt.solve(sys.C.transpose());

  Matrix J = 0.5 * (AXi - AXi.transpose());
  Matrix R = -0.5 * (AXi + AXi.transpose());
  Matrix G = 0.5 * (XiCt + sys.B);
  Matrix P = 0.5 * (XiCt - sys.B);
  Matrix S = 0.5 * (sys.D + sys.D.transpose());
  Matrix N = -0.5 * (sys.D - sys.D.transpose());
  return PhSystem(std::move(J), std::move(R), Xs, std::move(G), std::move(P), std::move(S),
                  std::move(N));
}

ComplexMatrix evaluate_transfer(const LtiSystem &sys, std::complex<double> s)
{
  const auto n = sys.n();
  ComplexMatrix M = -sys.A.cast<std::complex<double>>();
  M.diagonal().array() += s;
  Eigen::PartialPivLU<ComplexMatrix> lu(M);
  if (n > 0 && !(lu.rcond() > 1e-14))
  {
    throw Error(ErrorKind::SingularShift, "sI - A is singular at the requested point");
  }
  const ComplexMatrix X = n > 0 ? ComplexMatrix(lu.solve(sys.B.cast<std::complex<double>>()))
                                : ComplexMatrix::Zero(0, sys.m());
  return sys.C.cast<std::complex<double>>() * X + sys.D.cast<std::complex<double>>();
}

PhSystem transform_ph(const PhSystem &sys, const MatrixRef &V)
{
  const auto n = sys.n();
  if (V.rows() != n || V.cols() != n)
  {
    throw Error(ErrorKind::DimensionMismatch, "transformation must be square of order " +
                                                  std::to_string(n));
  }
  Eigen::PartialPivLU<Matrix> lu(V);
  const Matrix ViJ = lu.solve(sys.J);
  const Matrix ViR = lu.solve(sys.R);
  Matrix J = lu.solve(ViJ.transpose()).transpose();
  Matrix R = lu.solve(ViR.transpose()).transpose();
  J = 0.5 * (J - J.transpose());
  R = symmetrize(R);
  Matrix Q = symmetrize(V.transpose() * sys.Q * V);
  return PhSystem(std::move(J), std::move(R), std::move(Q), lu.solve(sys.G), lu.solve(sys.P),
                  sys.S, sys.N);
}

PhSystem project_ph(const PhSystem &sys, const MatrixRef &V, const MatrixRef &W)
{
  const auto n = sys.n();
  if (V.rows() != n || W.rows() != n || V.cols() != W.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, "projection bases must both be " +
                                                  std::to_string(n) + "xr");
  }
  Matrix J = W.transpose() * sys.J * W;
  J = 0.5 * (J - J.transpose());
  Matrix R = symmetrize(W.transpose() * sys.R * W);
  Matrix Q = symmetrize(V.transpose() * sys.Q * V);
  return PhSystem(std::move(J), std::move(R), std::move(Q), W.transpose() * sys.G,
                  W.transpose() * sys.P, sys.S, sys.N);
}

PhSystem with_feedthrough(const PhSystem &sys, double eps)
{
  PhSystem out = sys;
  out.S.diagonal().array() += eps;
  return out;
}

LtiSystem with_feedthrough(const LtiSystem &sys, double eps)
{
  if (sys.p() != sys.m())
  {
    throw Error(ErrorKind::DimensionMismatch, "feedthrough regularization needs p = m");
  }
  LtiSystem out = sys;
  out.D.diagonal().array() += eps;
  return out;
}

Vector Signal::at(double t) const
{
  if (times.empty())
  {
    return Vector::Zero(values.rows());
  }
  if (t <= times.front())
  {
    return values.col(0);
  }
  if (t >= times.back())
  {
    return values.col(values.cols() - 1);
  }
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto k = static_cast<Eigen::Index>(it - times.begin());
  const double t0 = times[k - 1], t1 = times[k];
  const double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * values.col(k - 1) + w * values.col(k);
}

Trajectory simulate(const ExtendedPhSystem &sys, const Signal &input, const MatrixRef &x0,
                    double dt)
{
  if (!(dt > 0.0))
  {
    throw Error(ErrorKind::InvalidArgument, "time step must be positive");
  }
  const LtiSystem io = sys.io();
  const auto n = io.n(), m = io.m();
  if (x0.rows() != n || x0.cols() != 1)
  {
    throw Error(ErrorKind::DimensionMismatch, "initial state must have " + std::to_string(n) +
                                                  " entries");
  }
  if (!input.times.empty() && input.values.rows() != m)
  {
    throw Error(ErrorKind::DimensionMismatch, "input signal must have " + std::to_string(m) +
                                                  " channels");
  }
  for (std::size_t i = 1; i < input.times.size(); ++i)
  {
    if (!(input.times[i] > input.times[i - 1]))
    {
      throw Error(ErrorKind::InvalidArgument, "signal sample times must increase strictly");
    }
  }

  const double T = input.end_time();
  const auto steps = static_cast<Eigen::Index>(std::llround(T / dt));

  Matrix lhs = -0.5 * dt * io.A;
  lhs.diagonal().array() += 1.0;
  Matrix rhs = 0.5 * dt * io.A;
  rhs.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Matrix> lu(lhs);
  if (n > 0 && !(lu.rcond() > 1e-14))
  {
    throw Error(ErrorKind::StepFactorizationFailed, "I - dt/2 A is numerically singular");
  }

  auto u_at = [&](double t) -> Vector {
    return input.times.empty() ? Vector::Zero(m) : input.at(t);
  };

  Trajectory traj;
  traj.t.resize(steps + 1);
  traj.y.resize(io.p(), steps + 1);
  traj.yH.resize(steps + 1);

  Vector x = x0;
  for (Eigen::Index k = 0; k <= steps; ++k)
  {
    const double t = static_cast<double>(k) * dt;
    const Vector u = u_at(t);
    traj.t[k] = t;
    traj.y.col(k) = io.C * x + io.D * u;
    traj.yH(k) = 0.5 * x.dot(sys.ph.Q * x);
    if (k < steps)
    {
      const Vector um = u_at(t + 0.5 * dt);
      x = lu.solve(rhs * x + dt * (io.B * um));
    }
  }
  return traj;
}

}  // namespace phem
