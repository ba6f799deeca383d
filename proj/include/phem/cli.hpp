// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PHEM_CLI_HPP
#define PHEM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace phem
{

constexpr const char *kToolVersion = "0.1.0";

// Exit codes of the command-line tool.
constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

// Runs the `phem` command line. args[0] is the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace phem

#endif  // PHEM_CLI_HPP
