// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

namespace windquad {

/// Extended state of the vehicle: translation, Z-Y-X Euler attitude, and the
/// four rotor speeds appended so that rotor angular accelerations become the
/// control inputs.
using State = Eigen::Matrix<double, 16, 1>;
using RotorSpeeds = Eigen::Vector4d;   // rad/s, rotors 1..4
using RotorAccel = Eigen::Vector4d;    // rad/s^2, the control vector

namespace idx {
enum : int {
  kX = 0,
  kXDot,
  kY,
  kYDot,
  kZ,
  kZDot,
  kPhi,
  kPhiDot,
  kTheta,
  kThetaDot,
  kPsi,
  kPsiDot,
  kW1,
  kW2,
  kW3,
  kW4,
};
}  // namespace idx

struct QuadrotorParams {
  double mass;           // kg
  double arm_length;     // m, center of mass to rotor shaft
  double inertia_x;      // kg m^2
  double inertia_y;      // kg m^2
  double inertia_z;      // kg m^2
  double rotor_inertia;  // kg m^2, motor + propeller
  double thrust_coeff;   // N s^2/rad^2
  double drag_coeff;     // N m s^2/rad^2, propeller drag/torque
  double gravity = 9.81; // m/s^2
};

/// Throws std::invalid_argument naming the offending field. The three body
/// inertias must form a physically valid triple (each at most the sum of the
/// other two).
void validate(const QuadrotorParams& p);

struct Limits {
  double omega_max;   // rad/s, per rotor
  double alpha_max;   // rad/s^2, per rotor
  double angle_max;   // rad, roll/pitch box
  double torque_max;  // N m, per torque channel
  double thrust_max;  // N, always 4 * thrust_coeff * omega_max^2

  /// thrust_max is derived, never set directly.
  static Limits derive(double omega_max, double alpha_max, double torque_max,
                       double angle_max, double thrust_coeff);
};

/// Throws std::invalid_argument when the state violates the angle or
/// rotor-speed boxes, or contains non-finite entries.
void validate_state(const State& s, const Limits& lim);

struct Wrench {
  double thrust;     // N
  double tau_roll;   // N m
  double tau_pitch;  // N m
  double tau_yaw;    // N m
};

/// Mixing map from squared rotor speeds to the thrust/torque wrench. Even in
/// each rotor speed; accepts any finite input.
Wrench wrench_of(const RotorSpeeds& w, const QuadrotorParams& p) noexcept;

/// Same map with the physical domain enforced: rejects negative rotor speeds
/// with std::domain_error.
Wrench control_map(const RotorSpeeds& w, const QuadrotorParams& p);

/// Rotor speed at which total thrust balances weight: sqrt(m g / (4 kb)).
double hover_speed(const QuadrotorParams& p);

/// Time derivative of the extended state. `wind_disturbance` enters the three
/// translational acceleration rows additively (callers apply any gain before
/// passing it in). Smooth for any finite state; the caller keeps roll/pitch
/// away from +-pi/2.
State dynamics_rhs(const State& s, const RotorAccel& u,
                   const Eigen::Vector3d& wind_disturbance,
                   const QuadrotorParams& p);

struct DynamicsJacobians {
  Eigen::Matrix<double, 16, 16> dstate;
  Eigen::Matrix<double, 16, 4> dcontrol;
};

/// Analytic Jacobians of dynamics_rhs with respect to state and control.
DynamicsJacobians dynamics_jacobians(const State& s, const QuadrotorParams& p);

}  // namespace windquad
