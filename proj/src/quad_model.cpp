// SPDX-License-Identifier: Apache-2.0
#include "windquad/quad_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace windquad {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be strictly positive");
  }
}

}  // namespace

void validate(const QuadrotorParams& p) {
  require_positive(p.mass, "mass");
  require_positive(p.arm_length, "arm_length");
  require_positive(p.inertia_x, "inertia_x");
  require_positive(p.inertia_y, "inertia_y");
  require_positive(p.inertia_z, "inertia_z");
  require_positive(p.rotor_inertia, "rotor_inertia");
  require_positive(p.thrust_coeff, "thrust_coeff");
  require_positive(p.drag_coeff, "drag_coeff");
  require_positive(p.gravity, "gravity");
  if (p.inertia_x > p.inertia_y + p.inertia_z ||
      p.inertia_y > p.inertia_x + p.inertia_z ||
      p.inertia_z > p.inertia_x + p.inertia_y) {
    throw std::invalid_argument("inertia_x/inertia_y/inertia_z do not form a valid inertia triple");
  }
}

Limits Limits::derive(double omega_max, double alpha_max, double torque_max,
                      double angle_max, double thrust_coeff) {
  require_positive(omega_max, "omega_max");
  require_positive(alpha_max, "alpha_max");
  require_positive(torque_max, "torque_max");
  require_positive(angle_max, "angle_max");
  require_positive(thrust_coeff, "thrust_coeff");
  Limits lim;
  lim.omega_max = omega_max;
  lim.alpha_max = alpha_max;
  lim.torque_max = torque_max;
  lim.angle_max = angle_max;
  lim.thrust_max = 4.0 * thrust_coeff * omega_max * omega_max;
  return lim;
}

void validate_state(const State& s, const Limits& lim) {
  if (!s.allFinite()) throw std::invalid_argument("state contains non-finite entries");
  if (std::abs(s[idx::kPhi]) > lim.angle_max)
    throw std::invalid_argument("roll exceeds angle_max");
  if (std::abs(s[idx::kTheta]) > lim.angle_max)
    throw std::invalid_argument("pitch exceeds angle_max");
  for (int j = 0; j < 4; ++j) {
    const double w = s[idx::kW1 + j];
    if (w < 0.0 || w > lim.omega_max)
      throw std::invalid_argument("rotor speed outside [0, omega_max]");
  }
}

Wrench wrench_of(const RotorSpeeds& w, const QuadrotorParams& p) noexcept {
  const double w1 = w[0] * w[0];
  const double w2 = w[1] * w[1];
  const double w3 = w[2] * w[2];
  const double w4 = w[3] * w[3];
  Wrench u;
  u.thrust = p.thrust_coeff * (w1 + w2 + w3 + w4);
  u.tau_roll = p.arm_length * p.thrust_coeff * (w2 - w4);
  u.tau_pitch = p.arm_length * p.thrust_coeff * (w3 - w1);
  u.tau_yaw = p.drag_coeff * (w1 - w2 + w3 - w4);
  return u;
}

Wrench control_map(const RotorSpeeds& w, const QuadrotorParams& p) {
  for (int j = 0; j < 4; ++j) {
    if (w[j] < 0.0) throw std::domain_error("control_map: negative rotor speed");
  }
  return wrench_of(w, p);
}

double hover_speed(const QuadrotorParams& p) {
  return std::sqrt(p.mass * p.gravity / (4.0 * p.thrust_coeff));
}

State dynamics_rhs(const State& s, const RotorAccel& u,
                   const Eigen::Vector3d& wind_disturbance,
                   const QuadrotorParams& p) {
  const double cphi = std::cos(s[idx::kPhi]), sphi = std::sin(s[idx::kPhi]);
  const double cth = std::cos(s[idx::kTheta]), sth = std::sin(s[idx::kTheta]);
  const double cpsi = std::cos(s[idx::kPsi]), spsi = std::sin(s[idx::kPsi]);

  const RotorSpeeds w = s.tail<4>();
  const Wrench wr = wrench_of(w, p);
  const double varpi = w[0] - w[1] + w[2] - w[3];

  State f;
  f[idx::kX] = s[idx::kXDot];
  f[idx::kXDot] = (cphi * sth * cpsi + sphi * spsi) * wr.thrust / p.mass +
                  wind_disturbance[0];
  f[idx::kY] = s[idx::kYDot];
  f[idx::kYDot] = (cphi * sth * spsi - sphi * cpsi) * wr.thrust / p.mass +
                  wind_disturbance[1];
  f[idx::kZ] = s[idx::kZDot];
  f[idx::kZDot] = (cphi * cth) * wr.thrust / p.mass - p.gravity +
                  wind_disturbance[2];

  const double phidot = s[idx::kPhiDot];
  const double thdot = s[idx::kThetaDot];
  const double psidot = s[idx::kPsiDot];
  f[idx::kPhi] = phidot;
  f[idx::kPhiDot] = ((p.inertia_y - p.inertia_z) * thdot * psidot +
                     p.rotor_inertia * thdot * varpi + wr.tau_roll) /
                    p.inertia_x;
  f[idx::kTheta] = thdot;
  f[idx::kThetaDot] = ((p.inertia_z - p.inertia_x) * phidot * psidot -
                       p.rotor_inertia * phidot * varpi + wr.tau_pitch) /
                      p.inertia_y;
  f[idx::kPsi] = psidot;
  f[idx::kPsiDot] =
      ((p.inertia_x - p.inertia_y) * phidot * thdot + wr.tau_yaw) / p.inertia_z;

  f.tail<4>() = u;
  return f;
}

DynamicsJacobians dynamics_jacobians(const State& s, const QuadrotorParams& p) {
  const double cphi = std::cos(s[idx::kPhi]), sphi = std::sin(s[idx::kPhi]);
  const double cth = std::cos(s[idx::kTheta]), sth = std::sin(s[idx::kTheta]);
  const double cpsi = std::cos(s[idx::kPsi]), spsi = std::sin(s[idx::kPsi]);

  const RotorSpeeds w = s.tail<4>();
  const double thrust = p.thrust_coeff * w.squaredNorm();
  const double varpi = w[0] - w[1] + w[2] - w[3];
  const double phidot = s[idx::kPhiDot];
  const double thdot = s[idx::kThetaDot];
  const double psidot = s[idx::kPsiDot];

  DynamicsJacobians J;
  J.dstate.setZero();
  J.dcontrol.setZero();

  // Kinematic rows.
  J.dstate(idx::kX, idx::kXDot) = 1.0;
  J.dstate(idx::kY, idx::kYDot) = 1.0;
  J.dstate(idx::kZ, idx::kZDot) = 1.0;
  J.dstate(idx::kPhi, idx::kPhiDot) = 1.0;
  J.dstate(idx::kTheta, idx::kThetaDot) = 1.0;
  J.dstate(idx::kPsi, idx::kPsiDot) = 1.0;

  // Thrust direction factors and their angle partials.
  const double rx = cphi * sth * cpsi + sphi * spsi;
  const double ry = cphi * sth * spsi - sphi * cpsi;
  const double rz = cphi * cth;
  const double ti = thrust / p.mass;

  J.dstate(idx::kXDot, idx::kPhi) = (-sphi * sth * cpsi + cphi * spsi) * ti;
  J.dstate(idx::kXDot, idx::kTheta) = (cphi * cth * cpsi) * ti;
  J.dstate(idx::kXDot, idx::kPsi) = (-cphi * sth * spsi + sphi * cpsi) * ti;

  J.dstate(idx::kYDot, idx::kPhi) = (-sphi * sth * spsi - cphi * cpsi) * ti;
  J.dstate(idx::kYDot, idx::kTheta) = (cphi * cth * spsi) * ti;
  J.dstate(idx::kYDot, idx::kPsi) = (cphi * sth * cpsi + sphi * spsi) * ti;

  J.dstate(idx::kZDot, idx::kPhi) = (-sphi * cth) * ti;
  J.dstate(idx::kZDot, idx::kTheta) = (-cphi * sth) * ti;

  for (int j = 0; j < 4; ++j) {
    const double dthrust = 2.0 * p.thrust_coeff * w[j] / p.mass;
    J.dstate(idx::kXDot, idx::kW1 + j) = rx * dthrust;
    J.dstate(idx::kYDot, idx::kW1 + j) = ry * dthrust;
    J.dstate(idx::kZDot, idx::kW1 + j) = rz * dthrust;
  }

  // Rotational rows.
  const double lb = p.arm_length * p.thrust_coeff;
  const double varpi_sign[4] = {1.0, -1.0, 1.0, -1.0};

  J.dstate(idx::kPhiDot, idx::kThetaDot) =
      ((p.inertia_y - p.inertia_z) * psidot + p.rotor_inertia * varpi) / p.inertia_x;
  J.dstate(idx::kPhiDot, idx::kPsiDot) =
      (p.inertia_y - p.inertia_z) * thdot / p.inertia_x;

  J.dstate(idx::kThetaDot, idx::kPhiDot) =
      ((p.inertia_z - p.inertia_x) * psidot - p.rotor_inertia * varpi) / p.inertia_y;
  J.dstate(idx::kThetaDot, idx::kPsiDot) =
      (p.inertia_z - p.inertia_x) * phidot / p.inertia_y;

  J.dstate(idx::kPsiDot, idx::kPhiDot) =
      (p.inertia_x - p.inertia_y) * thdot / p.inertia_z;
  J.dstate(idx::kPsiDot, idx::kThetaDot) =
      (p.inertia_x - p.inertia_y) * phidot / p.inertia_z;

  for (int j = 0; j < 4; ++j) {
    const double gyro = p.rotor_inertia * varpi_sign[j];
    double droll = gyro * thdot;
    double dpitch = -gyro * phidot;
    if (j == 1) droll += 2.0 * lb * w[1];
    if (j == 3) droll -= 2.0 * lb * w[3];
    if (j == 2) dpitch += 2.0 * lb * w[2];
    if (j == 0) dpitch -= 2.0 * lb * w[0];
    J.dstate(idx::kPhiDot, idx::kW1 + j) = droll / p.inertia_x;
    J.dstate(idx::kThetaDot, idx::kW1 + j) = dpitch / p.inertia_y;
    J.dstate(idx::kPsiDot, idx::kW1 + j) =
        p.drag_coeff * varpi_sign[j] * 2.0 * w[j] / p.inertia_z;
  }

  // Rotor-speed rows follow the controls directly.
  for (int j = 0; j < 4; ++j) J.dcontrol(idx::kW1 + j, j) = 1.0;

  return J;
}

}  // namespace windquad
