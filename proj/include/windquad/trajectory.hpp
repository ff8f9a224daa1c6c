// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "windquad/quad_model.hpp"

namespace windquad {

struct TrajectoryPoint {
  double t;
  State state;
  RotorAccel control;
};

using Trajectory = std::vector<TrajectoryPoint>;

}  // namespace windquad
