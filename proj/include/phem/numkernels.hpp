// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_NUMKERNELS_HPP
#define PHEM_NUMKERNELS_HPP

#include <vector>
#include <Eigen/Dense>

namespace phem
{

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;

struct SolveReport
{
  double residual_rel = 0.0;        // relative Frobenius residual
  double condition_estimate = 0.0;  // (|A| + |F|) / min |lambda_i + mu_j|
};

struct MatrixSolution
{
  Matrix X;
  SolveReport report;
};

// Solves A X + X A^T + M = 0 by Bartels-Stewart. The result is symmetrized.
MatrixSolution solve_lyapunov(const MatrixRef &A, const MatrixRef &M);

// Solves A Y + Y F + M = 0 by Bartels-Stewart on the real Schur forms of A and F.
MatrixSolution solve_sylvester(const MatrixRef &A, const MatrixRef &F, const MatrixRef &M);

enum class AreBranch
{
  Min,  // stabilizing solution
  Max,  // anti-stabilizing solution
};

struct AreSolution
{
  Matrix X;
  double residual_rel = 0.0;
  // eigenvalues of the closed-loop matrix A + B (D + D^T)^{-1} (B^T X - C)
  ComplexVector closed_loop_eigenvalues;
};

// Extremal solution of the passivity Riccati equation
//   A^T X + X A + (X B - C^T)(D + D^T)^{-1}(B^T X - C) + shift I = 0
// from an ordered QZ decomposition of the associated extended Hamiltonian pencil. A positive
// shift gives solutions with a strictly positive definite KYP matrix.
AreSolution solve_are_extremal(const MatrixRef &A, const MatrixRef &B, const MatrixRef &C,
                               const MatrixRef &D, AreBranch which, double shift = 0.0);

struct SymEig
{
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns
};

SymEig sym_eig(const MatrixRef &S);

struct Staircase
{
  Matrix V;                      // orthogonal, V^T A V = [[A_c, *], [0, A_uc]]
  int dim_controllable = 0;
  std::vector<int> block_sizes;  // staircase step ranks
  double zero_block_norm = 0.0;  // Frobenius norm of the discarded (zeroed) couplings
};

// Orthogonal staircase reduction of (A, B). Singular values <= tol count as zero.
Staircase controllable_staircase(const MatrixRef &A, const MatrixRef &B, double tol);

// max(rows, cols) * eps * largest singular value
double default_rank_tol(const MatrixRef &M);

// Orthonormal basis of the intersection of range(U1) and range(U2) (both with orthonormal
// columns). Principal angles whose cosine is within tol of one span the intersection.
Matrix subspace_intersection(const MatrixRef &U1, const MatrixRef &U2, double tol);

// Orthonormal basis of the orthogonal complement of range(U) (U with orthonormal columns).
Matrix orthogonal_complement(const MatrixRef &U);

Matrix symmetrize(const MatrixRef &M);
double spectral_abscissa(const MatrixRef &A);
double min_eigenvalue(const MatrixRef &S);

}  // namespace phem

#endif  // PHEM_NUMKERNELS_HPP
