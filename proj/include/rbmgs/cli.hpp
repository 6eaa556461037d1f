// Copyright 2026 The rbmgs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rbmgs {

/// Runs the command-line interface on `args` (excluding the program name).
/// Exit codes: 0 success, 1 runtime failure, 2 usage or input parse error.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace rbmgs
