// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_KYP_HPP
#define PHEM_KYP_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>
#include "phem/systems.hpp"

namespace phem
{

constexpr double kDefaultKypTol = 1e-8;
constexpr double kArtificialFeedthrough = 1e-6;

struct KypCertificate
{
  Matrix X;
  double min_eig_X = 0.0;
  double min_eig_W = 0.0;  // smallest eigenvalue of the KYP matrix at X
  std::optional<double> are_residual_rel;
  ComplexVector closed_loop_eigenvalues;
  double feedthrough_eps = 0.0;  // eps of the eps * I added to D before solving, if any
  std::vector<std::string> warnings;
};

// [[-A^T X - X A, C^T - X B], [C - B^T X, D + D^T]]
Matrix kyp_matrix(const LtiSystem &sys, const MatrixRef &X);

struct Feasibility
{
  bool feasible = false;
  double min_eig_W = 0.0;
  double min_eig_X = 0.0;
  double tol_W = 0.0;  // absolute tolerances actually applied
  double tol_X = 0.0;
};

// Membership test for the KYP feasible set. `tol` is scaled by max(1, |W|_2) for the
// KYP matrix and by max(1, |X|_2) for positive definiteness of X.
Feasibility is_feasible(const LtiSystem &sys, const MatrixRef &X, double tol = kDefaultKypTol);

// Stabilizing (min) and anti-stabilizing (max) solutions of the passivity Riccati equation.
std::pair<KypCertificate, KypCertificate> extremal_solutions(const LtiSystem &sys);

// A solution with positive definite KYP matrix: the midpoint of the extremal solutions of the
// Riccati equation with an added shift * I, for the largest shift in a decreasing sequence
// that succeeds. Needs D + D^T positive definite. Throws NoInteriorPoint otherwise.
KypCertificate strictly_feasible_solution(const LtiSystem &sys);

struct PassivityReport
{
  bool passive = false;
  KypCertificate certificate;  // X_min when available
  std::string diagnostic;
};

// Decides passivity through the minimal Riccati solution. A singular D + D^T is regularized
// by kArtificialFeedthrough * I, which is recorded in the certificate.
PassivityReport is_passive(const LtiSystem &sys, double tol = kDefaultKypTol);

}  // namespace phem

#endif  // PHEM_KYP_HPP
