// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_SYSTEMS_HPP
#define PHEM_SYSTEMS_HPP

#include <complex>
#include <string>
#include <vector>
#include "phem/numkernels.hpp"

namespace phem
{

// x' = A x + B u,  y = C x + D u
struct LtiSystem
{
  Matrix A, B, C, D;

  LtiSystem() = default;
  LtiSystem(Matrix A_, Matrix B_, Matrix C_, Matrix D_);

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
  Eigen::Index p() const { return C.rows(); }
};

// x' = (J - R) Q x + (G - P) u,  y = (G + P)^T Q x + (S - N) u,  H(x) = x^T Q x / 2
struct PhSystem
{
  Matrix J, R, Q, G, P, S, N;

  PhSystem() = default;
  PhSystem(Matrix J_, Matrix R_, Matrix Q_, Matrix G_, Matrix P_, Matrix S_, Matrix N_);

  Eigen::Index n() const { return J.rows(); }
  Eigen::Index m() const { return G.cols(); }

  // [[J, G], [-G^T, N]]
  Matrix structure_matrix() const;
  // [[R, P], [P^T, S]]
  Matrix dissipation_matrix() const;
};

// Linear dynamics with the single quadratic output y = x^T Qout x / 2.
struct LtiqoSystem
{
  Matrix A, B, Qout;

  LtiqoSystem() = default;
  LtiqoSystem(Matrix A_, Matrix B_, Matrix Qout_);

  Eigen::Index n() const { return A.rows(); }
};

// A pH system together with its Hamiltonian as second (quadratic) output.
struct ExtendedPhSystem
{
  PhSystem ph;

  ExtendedPhSystem() = default;
  explicit ExtendedPhSystem(PhSystem sys) : ph(std::move(sys)) {}

  Eigen::Index n() const { return ph.n(); }
  Eigen::Index m() const { return ph.m(); }

  LtiSystem io() const;
  LtiqoSystem ham() const;
};

struct Violation
{
  std::string what;
  double magnitude = 0.0;
};

struct ValidationReport
{
  std::vector<Violation> violations;
  double tol_used = 0.0;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

constexpr double kDefaultValidationTol = 1e-8;

// Checks the three defining pH conditions. `tol` is relative to the largest matrix entry
// (floored at one).
ValidationReport validate_ph(const PhSystem &sys, double tol = kDefaultValidationTol);

LtiSystem ph_to_lti(const PhSystem &sys);

// pH factorization of `sys` with Hamiltonian Hessian X. Throws NotFeasible when X violates
// the KYP inequality beyond `tol` and NotPositiveDefinite when X is not positive definite.
PhSystem lti_to_ph(const LtiSystem &sys, const MatrixRef &X, double tol = 1e-8);

ComplexMatrix evaluate_transfer(const LtiSystem &sys, std::complex<double> s);

// State-space transformation x = V z of a pH system. The result is again in pH form.
PhSystem transform_ph(const PhSystem &sys, const MatrixRef &V);

// Petrov-Galerkin restriction with W^T V = I: Q -> V^T Q V, (J, R) -> W^T (J, R) W,
// (G, P) -> W^T (G, P). pH structure is kept whenever Q V = W V^T Q V holds.
PhSystem project_ph(const PhSystem &sys, const MatrixRef &V, const MatrixRef &W);

// Adds eps * I to the symmetric feedthrough part.
PhSystem with_feedthrough(const PhSystem &sys, double eps);
LtiSystem with_feedthrough(const LtiSystem &sys, double eps);

// Piecewise-linear input signal; held constant outside the sample range.
struct Signal
{
  std::vector<double> times;  // strictly increasing
  Matrix values;              // m x times.size()

  Vector at(double t) const;
  double end_time() const { return times.empty() ? 0.0 : times.back(); }
};

struct Trajectory
{
  std::vector<double> t;
  Matrix y;   // outputs, one column per time step
  Vector yH;  // Hamiltonian
};

// Implicit midpoint integration on [0, input.end_time()] with step dt.
Trajectory simulate(const ExtendedPhSystem &sys, const Signal &input, const MatrixRef &x0,
                    double dt);

}  // namespace phem

#endif  // PHEM_SYSTEMS_HPP
