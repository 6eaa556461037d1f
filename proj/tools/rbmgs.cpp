// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "rbmgs/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rbmgs::run_cli(std::move(args), std::cout, std::cerr);
}
