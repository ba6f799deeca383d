// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_ENERGYMATCH_HPP
#define PHEM_ENERGYMATCH_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>
#include "phem/systems.hpp"

namespace phem
{

// Data of the cost J(Qr) = |Sigma_H - Sigma_H,r(Qr)|^2, which depends on the reduced
// Hamiltonian Hessian Qr only through P_rom and Y^T Q Y.
struct EnergyMatchProblem
{
  Matrix P_fom;  // A P + P A^T + B B^T = 0
  Matrix Q_fom;
  Matrix P_rom;  // Ar Pr + Pr Ar^T + Br Br^T = 0
  Matrix Y;      // A Y + Y Ar^T + B Br^T = 0
  Matrix YtQY;
  LtiSystem rom_lti;
  double const_term = 0.0;  // tr(P Q P Q) / 4
};

EnergyMatchProblem build_problem(const ExtendedPhSystem &fom, const LtiSystem &rom);
// Same data from the Hamiltonian dynamic (A, B, Q) of the full model alone. Used when the
// Hessian is only positive semidefinite numerically and no pH factorization can be formed.
EnergyMatchProblem build_problem(const LtiqoSystem &fom_ham, const LtiSystem &rom);

double cost(const EnergyMatchProblem &prob, const MatrixRef &Qr);
Matrix grad_cost(const EnergyMatchProblem &prob, const MatrixRef &Qr);

// -log det W(Qr) when the KYP matrix is positive definite, +inf otherwise.
double barrier(const LtiSystem &rom, const MatrixRef &Qr);
// Gradient of `barrier`; throws NotInInterior outside the open feasible set.
Matrix grad_barrier(const LtiSystem &rom, const MatrixRef &Qr);

// Column-wise stacking of the lower triangle.
Vector vech(const MatrixRef &S);
Matrix vech_inv(const Vector &v, Eigen::Index r);
// vec(S) = D vech(S) for symmetric S
Matrix duplication_matrix(Eigen::Index r);

enum class InitStrategy
{
  CandidateSet,
  UserSupplied,
};

std::vector<double> default_alpha_schedule();

struct EnergyMatchConfig
{
  std::vector<double> alpha_schedule = default_alpha_schedule();
  double bfgs_grad_tol = 1e-9;
  int bfgs_max_iter = 500;
  InitStrategy init_strategy = InitStrategy::CandidateSet;
  std::optional<Matrix> initial_Q;  // used with InitStrategy::UserSupplied
  double feasibility_tol = 1e-8;
};

struct EnergyMatchResult
{
  Matrix Q_opt;
  double cost = 0.0;
  std::vector<double> cost_history;  // cost after each barrier parameter
  double min_eig_W = 0.0;
  bool converged = false;
  Matrix Q_init;           // starting point of the barrier iteration
  double initial_cost = 0.0;  // best cost among the initialization candidates
  double feedthrough_eps = 0.0;
  LtiSystem rom_lti;          // the reduced state-space model, carried over unchanged
  ExtendedPhSystem rom_ph;    // its pH factorization with Hamiltonian Hessian Q_opt
  int total_iterations = 0;
};

EnergyMatchResult energy_match(const ExtendedPhSystem &fom, const LtiSystem &rom,
                               const EnergyMatchConfig &cfg = {});
EnergyMatchResult energy_match(const LtiqoSystem &fom_ham, const LtiSystem &rom,
                               const EnergyMatchConfig &cfg = {});

// Writes the problem as an objective quadratic in vech(Qr) plus one linear matrix inequality
// in a sparse SDPA-like text layout (see docs/file-formats.md).
void export_sdp(const EnergyMatchProblem &prob, std::ostream &os);
void export_sdp(const EnergyMatchProblem &prob, const std::string &path);

}  // namespace phem

#endif  // PHEM_ENERGYMATCH_HPP
