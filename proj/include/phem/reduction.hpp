// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_REDUCTION_HPP
#define PHEM_REDUCTION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>
#include "phem/systems.hpp"

namespace phem
{

enum class RomMethod
{
  Prbt,
  PhIrka,
};

std::string to_string(RomMethod method);
RomMethod rom_method_from_string(const std::string &name);

struct RomResult
{
  ExtendedPhSystem rom_ph;
  LtiSystem rom_lti;
  RomMethod method = RomMethod::Prbt;
  std::optional<int> iterations;
  std::optional<std::vector<ComplexVector>> shift_history;
  bool converged = true;
  Vector characteristic_values;  // PRBT only, descending
  double feedthrough_eps = 0.0;  // eps * I added to D when D + D^T was singular
};

// Positive-real balanced truncation. The reduced pH form uses the reduced model's own
// minimal Riccati solution as Hamiltonian Hessian.
RomResult prbt(const LtiSystem &fom, int r);

struct PhIrkaOptions
{
  int max_iter = 100;
  double shift_tol = 1e-6;
  std::optional<ComplexVector> initial_shifts;    // closed under conjugation
  std::optional<ComplexMatrix> initial_tangents;  // m x r, one column per shift
  std::uint64_t seed = 1;
};

RomResult phirka(const ExtendedPhSystem &fom, int r, const PhIrkaOptions &opts = {});

}  // namespace phem

#endif  // PHEM_REDUCTION_HPP
