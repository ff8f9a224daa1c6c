// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <array>

namespace windquad {

struct WindHarmonic {
  double frequency;  // rad/s, used directly inside sin(frequency * t)
  double amplitude;  // m/s, sign allowed
};

struct WindAxisParams {
  double mean = 0.0;  // m/s
  std::array<WindHarmonic, 3> harmonics{};
  double gust_peak = 0.0;    // m/s
  double gust_period = 1.0;  // s, > 0
};

struct WindModelParams {
  WindAxisParams x;
  WindAxisParams y;
  // Vertical disturbance is structurally zero.
  // Gain (1/s) mapping wind speed to the acceleration disturbance fed into
  // the dynamics. The default keeps the wind numbers unchanged.
  double accel_gain = 1.0;
};

/// Sigmoid-of-sine gust: 2 vg / (1 + exp(-4 (sin(2 pi t / Tg) - 1))).
/// Strictly positive, peaking at exactly vg once per period.
double gust(double t, double gust_peak, double gust_period);

/// mean + three harmonics + gust.
double axis_wind(double t, const WindAxisParams& p);

/// (axis_wind_x, axis_wind_y, 0) in m/s.
Eigen::Vector3d wind_vector(double t, const WindModelParams& p);

/// accel_gain * wind_vector, the additive disturbance for the dynamics.
Eigen::Vector3d wind_disturbance(double t, const WindModelParams& p);

}  // namespace windquad
