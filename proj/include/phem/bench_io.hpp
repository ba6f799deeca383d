// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_BENCH_IO_HPP
#define PHEM_BENCH_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>
#include "phem/systems.hpp"

namespace phem
{

// Chain of masses, each tied to its predecessor (the first one to the wall) by a spring and
// a damper. Forces act on the first m masses; outputs are their velocities. Per-element
// vectors must have length 1 (broadcast) or n_masses.
struct MsdParams
{
  int n_masses = 50;
  std::vector<double> masses{4.0};
  std::vector<double> springs{4.0};
  std::vector<double> dampers{1.0};
  int m = 2;
};

// State (positions, momenta), Q = diag(K, M^{-1}).
ExtendedPhSystem gen_msd(const MsdParams &params);

// Voltage-driven ladder. Each cell has two identical parallel R-L branches in series and a
// capacitor to ground; the output is the input current. The difference of the two branch
// fluxes in every cell is uncontrollable, so the minimal order is at most 2 * n_cells.
struct RclParams
{
  int n_cells = 10;
  double R_val = 1.0;
  double C_val = 1.0;
  double L_val = 1.0;
};

// State per cell: (flux a, flux b, charge), Q = diag(1/L, 1/L, 1/C, ...).
ExtendedPhSystem gen_rcl(const RclParams &params);

enum class ReferenceExample
{
  Ex4_1,
  Ex5_1,
  Ex5_5,
  Ex5_6,
};

ReferenceExample reference_example_from_string(const std::string &name);
std::string to_string(ReferenceExample which);

struct ExampleData
{
  ExtendedPhSystem fom_ph;
  LtiSystem fom_lti;
  std::optional<LtiSystem> rom_lti;
  std::optional<ExtendedPhSystem> rom_ph;
};

// Small hand-checkable test systems: the full model in pH and state-space form and, where
// one belongs to it, a reduced model.
ExampleData gen_reference_example(ReferenceExample which);

using SystemData = std::variant<ExtendedPhSystem, LtiSystem>;

SystemData parse_system(std::istream &is, const std::string &source_name = "<stream>");
SystemData read_system(const std::string &path);
void write_system(const ExtendedPhSystem &sys, std::ostream &os);
void write_system(const LtiSystem &sys, std::ostream &os);
void write_system(const SystemData &sys, const std::string &path);

// The state-space view of either kind of file content.
LtiSystem as_lti(const SystemData &sys);

struct ResultRow
{
  int r = 0;
  double h2_io_abs = 0.0;
  double h2_io_rel = 0.0;
  double h2_ham_abs = 0.0;
  double h2_ham_rel = 0.0;
  double wall_time_s = 0.0;
  std::string method;
};

extern const char *const kResultsCsvHeader;

void write_results_csv(const std::vector<ResultRow> &rows, std::ostream &os);
void write_results_csv(const std::vector<ResultRow> &rows, const std::string &path);
std::vector<ResultRow> read_results_csv(const std::string &path);

}  // namespace phem

#endif  // PHEM_BENCH_IO_HPP
