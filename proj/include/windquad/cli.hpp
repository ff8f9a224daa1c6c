// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace windquad {

/// Full command-line surface (subcommands plan, simulate, compare,
/// wind-preview). Returns the process exit code: 0 success, 2 configuration
/// error, 3 solver non-convergence, 4 I/O error.
int run_cli(const std::vector<std::string>& args);

}  // namespace windquad
