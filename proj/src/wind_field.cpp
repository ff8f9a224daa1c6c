// SPDX-License-Identifier: Apache-2.0
#include "windquad/wind_field.hpp"

#include <cmath>
#include <stdexcept>

namespace windquad {

double gust(double t, double gust_peak, double gust_period) {
  if (!(gust_period > 0.0))
    throw std::invalid_argument("gust_period must be positive");
  const double s = std::sin(2.0 * M_PI * t / gust_period);
  return 2.0 * gust_peak / (1.0 + std::exp(-4.0 * (s - 1.0)));
}

double axis_wind(double t, const WindAxisParams& p) {
  double v = p.mean;
  for (const WindHarmonic& h : p.harmonics) {
    v += h.amplitude * std::sin(h.frequency * t);
  }
  return v + gust(t, p.gust_peak, p.gust_period);
}

Eigen::Vector3d wind_vector(double t, const WindModelParams& p) {
  return {axis_wind(t, p.x), axis_wind(t, p.y), 0.0};
}

Eigen::Vector3d wind_disturbance(double t, const WindModelParams& p) {
  return p.accel_gain * wind_vector(t, p);
}

}  // namespace windquad
