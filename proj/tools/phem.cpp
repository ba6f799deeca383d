// Copyright 2026 The phem Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include "phem/cli.hpp"

int main(int argc, char **argv)
{
  std::vector<std::string> args(argv, argv + argc);
  return phem::run_cli(args, std::cout, std::cerr);
}
