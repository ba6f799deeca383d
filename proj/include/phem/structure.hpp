// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_STRUCTURE_HPP
#define PHEM_STRUCTURE_HPP

#include <array>
#include "phem/systems.hpp"

namespace phem
{

// Relative tolerance for all rank decisions (eigenvalues of Q against the largest one,
// staircase steps against the scale of [A, B], principal-angle sines).
constexpr double kDefaultStructureTol = 1e-10;

// Restriction to range(Q). Identity when Q is positive definite at tol.
ExtendedPhSystem remove_unobservable_hamiltonian(const ExtendedPhSystem &sys,
                                                 double tol = kDefaultStructureTol);

struct ControllabilityForm
{
  ExtendedPhSystem sys;  // Q = I; leading n_c states controllable
  Matrix V;              // x = V z
  int n_c = 0;
  // Frobenius norm of the off-diagonal blocks of J and R between the controllable and the
  // uncontrollable states. These cancel in J - R but not individually.
  double coupling_norm = 0.0;
};

ControllabilityForm kalman_controllability_form(const ExtendedPhSystem &sys,
                                                double tol = kDefaultStructureTol);

enum BlockIndex
{
  kCo = 0,     // controllable, zero-state observable
  kNcO = 1,    // uncontrollable, zero-state observable
  kCNo = 2,    // controllable, not observable
  kNcNo = 3,   // uncontrollable, not observable
};

struct DecompositionReport
{
  Matrix V;  // x = V z, z ordered as (co, nc-o, c-no, nc-no)
  std::array<int, 4> dims{};
  ExtendedPhSystem transformed;  // full system in block form
  ExtendedPhSystem subsystem;    // the controllable and observable block, Q = I
  double tol_used = 0.0;
  double coupling_norm = 0.0;
  double zeroed_norm = 0.0;  // size of the entries set to zero in the designated blocks
};

DecompositionReport kalman_full_form(const ExtendedPhSystem &sys,
                                     double tol = kDefaultStructureTol);

ExtendedPhSystem minimal_realization(const ExtendedPhSystem &sys,
                                     double tol = kDefaultStructureTol);

}  // namespace phem

#endif  // PHEM_STRUCTURE_HPP
