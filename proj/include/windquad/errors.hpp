// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace windquad {

// Configuration parsing or validation failure; message names the offending key path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Optimizer failed to reach the requested tolerances.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure; message carries the path.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace windquad
