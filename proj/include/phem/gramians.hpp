// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_GRAMIANS_HPP
#define PHEM_GRAMIANS_HPP

#include <optional>
#include "phem/systems.hpp"

namespace phem
{

struct GramianSet
{
  Matrix P_ctrl;  // A P + P A^T + B B^T = 0
  Matrix O_obs;   // A^T O + O A + C^T C = 0
  std::optional<Matrix> O_qo;
};

struct CrossGramians
{
  Matrix Y;  // A Y + Y Ar^T + B Br^T = 0
  Matrix Z;  // A^T Z + Z Ar + C^T Cr = 0
};

GramianSet gramians(const LtiSystem &sys);

// Solution of A^T O + O A + Q P Q / 4 = 0.
Matrix qo_obs_gramian(const LtiqoSystem &sys, const MatrixRef &P_ctrl);

CrossGramians cross_gramians(const LtiSystem &fom, const LtiSystem &rom);

double h2_norm_lti(const LtiSystem &sys);
double h2_norm_ltiqo(const LtiqoSystem &sys);

// H2 norm of the strictly proper part (D ignored).
double h2_norm_strictly_proper(const LtiSystem &sys);

double h2_dist_lti(const LtiSystem &fom, const LtiSystem &rom);
double h2_dist_ltiqo(const LtiqoSystem &fom, const LtiqoSystem &rom);

// sqrt(h2_dist_lti(io)^2 + h2_dist_ltiqo(ham)^2). Both systems are first restricted to
// range(Q), which leaves both outputs unchanged.
double h2_dist_extended(const ExtendedPhSystem &fom, const ExtendedPhSystem &rom);

// Extended norm sqrt(|io|^2 + |ham|^2) of a single system (strictly proper io part).
double h2_norm_extended(const ExtendedPhSystem &sys);

// Distance of the Hamiltonian dynamics through the block-diagonal joint system. This is the
// independent cross-check of the trace formula.
double h2_dist_ltiqo_joint(const LtiqoSystem &fom, const LtiqoSystem &rom);

}  // namespace phem

#endif  // PHEM_GRAMIANS_HPP
