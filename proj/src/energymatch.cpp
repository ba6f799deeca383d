// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include "phem/energymatch.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include "phem/error.hpp"
#include "phem/gramians.hpp"
#include "phem/kyp.hpp"
#include "phem/structure.hpp"

namespace phem
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

double trace_prod(const Matrix &X, const Matrix &Y)
{
  return X.cwiseProduct(Y.transpose()).sum();
}

struct Objective
{
  const EnergyMatchProblem &prob;
  const LtiSystem &rom;
  const Matrix &D;
  Eigen::Index r;
  double alpha;

  double value(const Vector &q) const
  {
    const Matrix Q = vech_inv(q, r);
    const double psi = barrier(rom, Q);
    if (!std::isfinite(psi))
    {
      return kInf;
    }
    return cost(prob, Q) + alpha * psi;
  }

  Vector gradient(const Vector &q) const
  {
    const Matrix Q = vech_inv(q, r);
    const Matrix G = grad_cost(prob, Q) + alpha * grad_barrier(rom, Q);
    return D.transpose() * G.reshaped();
  }

  // Exact Hessian in half-vectorized coordinates: the constant cost part plus alpha times
  // the log-det barrier part  H_lk = tr(W^{-1} F_l W^{-1} F_k).
  Matrix hessian(const Vector &q, const Matrix &cost_hess) const
  {
    const Matrix Q = vech_inv(q, r);
    const Eigen::Index n = rom.n(), m = rom.m(), k = q.size();
    Eigen::LLT<Matrix> llt(symmetrize(kyp_matrix(rom, Q)));
    if (llt.info() != Eigen::Success)
    {
      return cost_hess;
    }
    const auto L = llt.matrixL();
    Matrix G(n + m, (n + m) * k);
    for (Eigen::Index l = 0; l < k; ++l)
    {
      const Matrix E = D.col(l).reshaped(r, r);
      Matrix F = Matrix::Zero(n + m, n + m);
      F.topLeftCorner(n, n) = -rom.A.transpose() * E - E * rom.A;
      F.topRightCorner(n, m) = -E * rom.B;
      F.bottomLeftCorner(m, n) = F.topRightCorner(n, m).transpose();
      Matrix T = L.solve(F);
      T = L.solve(T.transpose());
      G.middleCols(l * (n + m), n + m) = T;
    }
    const Eigen::Map<const Matrix> Gv(G.data(), (n + m) * (n + m), k);
    return cost_hess + alpha * (Gv.transpose() * Gv);
  }
};

struct StageResult
{
  Vector q;
  int iterations = 0;
  bool hit_limit = false;
};

Matrix inverse_hessian(const Objective &obj, const Vector &q, const Matrix &cost_hess)
{
  const Matrix Hs = obj.hessian(q, cost_hess);
  const Matrix I = Matrix::Identity(Hs.rows(), Hs.cols());
  Eigen::LLT<Matrix> llt(Hs);
  if (llt.info() == Eigen::Success)
  {
    return llt.solve(I);
  }
  return Hs.ldlt().solve(I);
}

// BFGS with Armijo backtracking. The inverse Hessian approximation starts from the exact
// inverse Hessian and is rebuilt from it once whenever the line search stalls.
StageResult bfgs(const Objective &obj, Vector q, const Matrix &cost_hess, double grad_tol,
                 int max_iter)
{
  StageResult out;
  double f = obj.value(q);
  Vector g = obj.gradient(q);
  Matrix H = inverse_hessian(obj, q, cost_hess);
  bool fresh = true;
  const Eigen::Index k = q.size();
  int it = 0;
  for (; it < max_iter; ++it)
  {
    if (g.lpNorm<Eigen::Infinity>() < grad_tol * std::max(1.0, std::abs(f)))
    {
      break;
    }
    Vector p = -H * g;
    double slope = g.dot(p);
    if (!(slope < 0.0) && !fresh)
    {
      H = inverse_hessian(obj, q, cost_hess);
      fresh = true;
      p = -H * g;
      slope = g.dot(p);
    }
    if (!(slope < 0.0))
    {
      break;
    }
    double t = 1.0;
    bool accepted = false;
    Vector q_new;
    double f_new = kInf;
    for (int bt = 0; bt < kMaxBacktracks; ++bt)
    {
      q_new = q + t * p;
      f_new = obj.value(q_new);
      if (std::isfinite(f_new) && f_new <= f + kArmijo * t * slope)
      {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted)
    {
      if (fresh)
      {
        // no representable decrease along the search direction
        break;
      }
      H = inverse_hessian(obj, q, cost_hess);
      fresh = true;
      --it;
      continue;
    }
    fresh = false;
    const Vector g_new = obj.gradient(q_new);
    const Vector s = q_new - q;
    const Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm())
    {
      const double rho = 1.0 / sy;
      const Matrix I = Matrix::Identity(k, k);
      H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }
    q = q_new;
    f = f_new;
    g = g_new;
  }
  out.q = q;
  out.iterations = it;
  out.hit_limit = it >= max_iter;
  return out;
}

// Moves Q towards the strictly feasible `center` until the KYP matrix is positive definite.
std::optional<Matrix> push_inside(const LtiSystem &rom, const Matrix &Q, const Matrix &center)
{
  auto ok = [&](const Matrix &X) { return std::isfinite(barrier(rom, X)); };
  if (ok(Q))
  {
    return Q;
  }
  for (double t = 1e-8; t <= 1.0; t *= 2.0)
  {
    const Matrix Qt = (1.0 - t) * Q + t * center;
    if (ok(Qt))
    {
      return Qt;
    }
  }
  if (std::isfinite(barrier(rom, center)))
  {
    return center;
  }
  return std::nullopt;
}

}  // namespace

EnergyMatchProblem build_problem(const ExtendedPhSystem &fom, const LtiSystem &rom)
{
  return build_problem(remove_unobservable_hamiltonian(fom, kDefaultStructureTol).ham(), rom);
}

EnergyMatchProblem build_problem(const LtiqoSystem &ham, const LtiSystem &rom)
{
  if (rom.m() != ham.B.cols())
  {
    throw Error(ErrorKind::DimensionMismatch, "full and reduced model have different inputs");
  }
  if (!(spectral_abscissa(ham.A) < 0.0))
  {
    throw Error(ErrorKind::Unstable, "full-order model is not asymptotically stable");
  }
  if (rom.n() > 0 && !(spectral_abscissa(rom.A) < 0.0))
  {
    throw Error(ErrorKind::Unstable, "reduced model is not asymptotically stable");
  }
  EnergyMatchProblem prob;
  prob.P_fom = solve_lyapunov(ham.A, ham.B * ham.B.transpose()).X;
  prob.Q_fom = ham.Qout;
  prob.P_rom = solve_lyapunov(rom.A, rom.B * rom.B.transpose()).X;
  prob.Y = solve_sylvester(ham.A, rom.A.transpose(), ham.B * rom.B.transpose()).X;
  prob.YtQY = symmetrize(prob.Y.transpose() * prob.Q_fom * prob.Y);
  prob.rom_lti = rom;
  const Matrix PQ = prob.P_fom * prob.Q_fom;
  prob.const_term = std::max(0.0, 0.25 * trace_prod(PQ, PQ));
  return prob;
}

double cost(const EnergyMatchProblem &prob, const MatrixRef &Qr)
{
  const Matrix PQ = prob.P_rom * Qr;
  return prob.const_term + 0.25 * trace_prod(PQ, PQ) - 0.5 * trace_prod(prob.YtQY, Qr);
}

Matrix grad_cost(const EnergyMatchProblem &prob, const MatrixRef &Qr)
{
  return symmetrize(0.5 * (prob.P_rom * Qr * prob.P_rom - prob.YtQY));
}

double barrier(const LtiSystem &rom, const MatrixRef &Qr)
{
  const Matrix W = symmetrize(kyp_matrix(rom, Qr));
  Eigen::LLT<Matrix> llt(W);
  if (llt.info() != Eigen::Success)
  {
    return kInf;
  }
  const Vector d = llt.matrixLLT().diagonal();
  if (!(d.minCoeff() > 0.0))
  {
    return kInf;
  }
  return -2.0 * d.array().log().sum();
}

Matrix grad_barrier(const LtiSystem &rom, const MatrixRef &Qr)
{
  const Eigen::Index n = rom.n(), m = rom.m();
  const Matrix W = symmetrize(kyp_matrix(rom, Qr));
  Eigen::LLT<Matrix> llt(W);
  if (llt.info() != Eigen::Success)
  {
    throw Error(ErrorKind::NotInInterior, "KYP matrix is not positive definite");
  }
  Matrix E = Matrix::Zero(n + m, n);
  E.topRows(n).setIdentity();
  const Matrix Z = llt.solve(E);  // W^{-1} [I; 0]
  Matrix AB(n, n + m);
  AB << rom.A, rom.B;
  const Matrix G1 = AB * Z;
  return G1 + G1.transpose();
}

Vector vech(const MatrixRef &S)
{
  const Eigen::Index r = S.rows();
  Vector v(r * (r + 1) / 2);
  Eigen::Index l = 0;
  for (Eigen::Index j = 0; j < r; ++j)
  {
    for (Eigen::Index i = j; i < r; ++i)
    {
      v(l++) = S(i, j);
    }
  }
  return v;
}

Matrix vech_inv(const Vector &v, Eigen::Index r)
{
  if (v.size() != r * (r + 1) / 2)
  {
    throw Error(ErrorKind::DimensionMismatch, "half-vectorization has the wrong length");
  }
  Matrix S(r, r);
  Eigen::Index l = 0;
  for (Eigen::Index j = 0; j < r; ++j)
  {
    for (Eigen::Index i = j; i < r; ++i)
    {
      S(i, j) = v(l);
      S(j, i) = v(l);
      ++l;
    }
  }
  return S;
}

Matrix duplication_matrix(Eigen::Index r)
{
  Matrix D = Matrix::Zero(r * r, r * (r + 1) / 2);
  Eigen::Index l = 0;
  for (Eigen::Index j = 0; j < r; ++j)
  {
    for (Eigen::Index i = j; i < r; ++i)
    {
      D(i + j * r, l) = 1.0;
      D(j + i * r, l) = 1.0;
      ++l;
    }
  }
  return D;
}

std::vector<double> default_alpha_schedule()
{
  std::vector<double> a;
  for (int e = 3; e <= 15; ++e)
  {
    a.push_back(std::pow(10.0, -e));
  }
  return a;
}

EnergyMatchResult energy_match(const ExtendedPhSystem &fom, const LtiSystem &rom,
                               const EnergyMatchConfig &cfg)
{
  return energy_match(remove_unobservable_hamiltonian(fom, kDefaultStructureTol).ham(), rom, cfg);
}

EnergyMatchResult energy_match(const LtiqoSystem &fom_ham, const LtiSystem &rom_in,
                               const EnergyMatchConfig &cfg)
{
  if (cfg.alpha_schedule.empty())
  {
    throw Error(ErrorKind::InvalidArgument, "barrier schedule is empty");
  }
  for (std::size_t i = 0; i < cfg.alpha_schedule.size(); ++i)
  {
    if (!(cfg.alpha_schedule[i] > 0.0) ||
        (i > 0 && !(cfg.alpha_schedule[i] < cfg.alpha_schedule[i - 1])))
    {
      throw Error(ErrorKind::InvalidArgument,
                  "barrier schedule must be positive and strictly decreasing");
    }
  }

  EnergyMatchResult res;
  LtiSystem rom = rom_in;
  if (rom.m() > 0)
  {
    const double dscale = std::max(1.0, rom.D.cwiseAbs().maxCoeff());
    if (min_eigenvalue(rom.D + rom.D.transpose()) < 1e-12 * dscale)
    {
      res.feedthrough_eps = kArtificialFeedthrough;
      rom = with_feedthrough(rom, res.feedthrough_eps);
    }
  }
  const Eigen::Index r = rom.n();
  const EnergyMatchProblem prob = build_problem(fom_ham, rom);

  const auto [xmin, xmax] = extremal_solutions(rom);
  // Convex combinations of xmin and xmax are singular on the KYP matrix as soon as r > m
  // (both have rank-m KYP matrices), so a strictly feasible point is computed separately.
  const Matrix interior = strictly_feasible_solution(rom).X;

  std::vector<Matrix> candidates{xmin.X, xmax.X, symmetrize(0.5 * (xmin.X + xmax.X)), interior};
  Matrix start;
  if (cfg.init_strategy == InitStrategy::UserSupplied)
  {
    if (!cfg.initial_Q || cfg.initial_Q->rows() != r || cfg.initial_Q->cols() != r)
    {
      throw Error(ErrorKind::InvalidArgument, "user-supplied start must be r x r");
    }
    start = symmetrize(*cfg.initial_Q);
  }
  else
  {
    start = candidates[0];
    double best = cost(prob, start);
    for (const Matrix &c : candidates)
    {
      const double v = cost(prob, c);
      if (v < best)
      {
        best = v;
        start = c;
      }
    }
  }
  res.initial_cost = cost(prob, start);
  for (const Matrix &c : candidates)
  {
    res.initial_cost = std::min(res.initial_cost, cost(prob, c));
  }

  const std::optional<Matrix> inside = push_inside(rom, start, interior);
  if (!inside)
  {
    throw Error(ErrorKind::NoInteriorPoint,
                "no initialization candidate has a positive definite KYP matrix");
  }
  res.Q_init = *inside;

  const Matrix D = duplication_matrix(r);
  Matrix PkP(r * r, r * r);
  for (Eigen::Index i = 0; i < r; ++i)
  {
    for (Eigen::Index j = 0; j < r; ++j)
    {
      PkP.block(i * r, j * r, r, r) = prob.P_rom(i, j) * prob.P_rom;
    }
  }
  const Matrix hess = 0.5 * D.transpose() * PkP * D;

  Vector q = vech(res.Q_init);
  res.converged = true;
  for (double alpha : cfg.alpha_schedule)
  {
    const Objective obj{prob, rom, D, r, alpha};
    const StageResult st = bfgs(obj, q, hess, cfg.bfgs_grad_tol, cfg.bfgs_max_iter);
    q = st.q;
    res.total_iterations += st.iterations;
    if (st.hit_limit)
    {
      res.converged = false;
    }
    res.cost_history.push_back(cost(prob, vech_inv(q, r)));
  }

  Matrix Q_opt = vech_inv(q, r);
  double best = cost(prob, Q_opt);
  for (const Matrix &c : candidates)
  {
    const double v = cost(prob, c);
    if (v < best && is_feasible(rom, c, cfg.feasibility_tol).feasible)
    {
      best = v;
      Q_opt = c;
    }
  }

  res.Q_opt = Q_opt;
  res.cost = best;
  res.min_eig_W = min_eigenvalue(symmetrize(kyp_matrix(rom, Q_opt)));
  res.rom_ph = ExtendedPhSystem(lti_to_ph(rom, Q_opt, cfg.feasibility_tol));
  res.rom_lti = std::move(rom);
  return res;
}

void export_sdp(const EnergyMatchProblem &prob, std::ostream &os)
{
  const LtiSystem &rom = prob.rom_lti;
  const Eigen::Index r = rom.n();
  const Eigen::Index k = r * (r + 1) / 2;
  const Matrix D = duplication_matrix(r);
  Matrix PkP(r * r, r * r);
  for (Eigen::Index i = 0; i < r; ++i)
  {
    for (Eigen::Index j = 0; j < r; ++j)
    {
      PkP.block(i * r, j * r, r, r) = prob.P_rom(i, j) * prob.P_rom;
    }
  }
  const Matrix H = 0.5 * D.transpose() * PkP * D;
  const Matrix lin_mat = -0.5 * prob.YtQY;
  const Vector lin = D.transpose() * lin_mat.reshaped();

  os << std::setprecision(17);
  os << "PHEM-SDP1\n";
  os << "variables " << k << "\n";
  os << "objective_constant " << prob.const_term << "\n";
  os << "objective_linear";
  for (Eigen::Index i = 0; i < k; ++i)
  {
    os << ' ' << lin(i);
  }
  os << "\n";
  os << "objective_quadratic\n";
  for (Eigen::Index i = 0; i < k; ++i)
  {
    for (Eigen::Index j = 0; j < k; ++j)
    {
      os << (j > 0 ? " " : "") << H(i, j);
    }
    os << "\n";
  }
  const Eigen::Index blk = rom.n() + rom.m();
  os << "lmi_block " << blk << "\n";
  const Matrix F0 = kyp_matrix(rom, Matrix::Zero(r, r));
  auto emit = [&](Eigen::Index idx, const Matrix &F) {
    for (Eigen::Index i = 0; i < blk; ++i)
    {
      for (Eigen::Index j = i; j < blk; ++j)
      {
        if (F(i, j) != 0.0)
        {
          os << idx << ' ' << i + 1 << ' ' << j + 1 << ' ' << F(i, j) << "\n";
        }
      }
    }
  };
  emit(0, F0);
  for (Eigen::Index l = 0; l < k; ++l)
  {
    Vector e = Vector::Zero(k);
    e(l) = 1.0;
    emit(l + 1, kyp_matrix(rom, vech_inv(e, r)) - F0);
  }
  os << "end\n";
}

void export_sdp(const EnergyMatchProblem &prob, const std::string &path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  }
  export_sdp(prob, os);
  if (!os)
  {
    throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
  }
}

}  // namespace phem
