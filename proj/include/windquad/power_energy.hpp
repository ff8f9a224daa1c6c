// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "windquad/quad_model.hpp"
#include "windquad/trajectory.hpp"

namespace windquad {

struct MotorParams {
  double resistance;       // ohm
  double torque_constant;  // N m / A
  double speed_constant;   // rad/s per volt
  double rotor_inertia;    // kg m^2, numerically shared with QuadrotorParams
  double drag_coeff;       // N m s^2/rad^2, shared with QuadrotorParams
};

enum class EfficiencyMode { kConstant, kPolynomial };

/// Rotor drivetrain efficiency f(omega_dot, omega). The polynomial mode
/// evaluates sum_ij c(i,j) * omega_dot^i * omega^j; either mode is clamped to
/// [clamp_floor, 1] before use.
struct EfficiencySpec {
  EfficiencyMode mode = EfficiencyMode::kConstant;
  double constant_value = 1.0;
  Eigen::MatrixXd poly_coeffs;  // c(i,j), row index = omega_dot power
  double clamp_floor = 0.05;
};

double efficiency(double omega_dot, double omega, const EfficiencySpec& eff);

/// (d/d omega_dot, d/d omega); zero on clamped branches and in constant mode.
Eigen::Vector2d efficiency_partials(double omega_dot, double omega,
                                    const EfficiencySpec& eff);

struct MotorSteadyState {
  double torque;   // N m
  double current;  // A
  double voltage;  // V
};

/// Steady-state electrical point of one motor: torque balances rotor inertia
/// plus propeller drag, current follows from the torque constant, voltage adds
/// the back-EMF. Rejects a zero torque constant.
MotorSteadyState motor_steady_state(double omega, double omega_dot,
                                    const MotorParams& p);

/// Total efficiency-weighted mechanical power of the four rotors. Negative
/// per-rotor mechanical power (braking) is clamped to zero: the drivetrain
/// does not regenerate.
double power_integrand(const RotorSpeeds& w, const RotorAccel& a,
                       const EfficiencySpec& eff, const MotorParams& p);

/// Partials of power_integrand with respect to each rotor's speed and
/// acceleration, honoring the clamps.
void power_integrand_partials(const RotorSpeeds& w, const RotorAccel& a,
                              const EfficiencySpec& eff, const MotorParams& p,
                              Eigen::Ref<Eigen::Vector4d> dP_dw,
                              Eigen::Ref<Eigen::Vector4d> dP_da);

/// Trapezoidal quadrature of power_integrand along the trajectory, in joules.
/// Requires at least two samples on a strictly increasing time grid.
double trajectory_energy(const Trajectory& traj, const EfficiencySpec& eff,
                         const MotorParams& p);

/// Running trapezoid of the same integrand; last entry equals
/// trajectory_energy of the whole trace.
Eigen::VectorXd cumulative_energy(const Trajectory& traj,
                                  const EfficiencySpec& eff,
                                  const MotorParams& p);

struct BatteryParams {
  double capacity;      // A h
  double resistance;    // ohm, internal
  double full_voltage;  // V, open circuit at full charge
  double bias_voltage;  // V
  double exp_voltage;   // V
  double exp_capacity;  // 1/(A h)
};

struct BatteryState {
  double charge_drawn = 0.0;          // A h
  double soc = 100.0;                 // percent
  double open_circuit_voltage = 0.0;  // V
  double terminal_voltage = 0.0;      // V
};

/// Cell state at a given drawn charge and instantaneous pack current.
/// Throws std::domain_error once the drawn charge reaches capacity.
BatteryState battery_eval(double charge_drawn, double current,
                          const BatteryParams& p);

/// Integrates the drawn charge over dt (seconds) at constant current and
/// re-evaluates the cell. Signals depletion when the remaining charge would
/// not cover the step.
BatteryState battery_step(const BatteryState& bs, double current, double dt,
                          const BatteryParams& p);

struct BatterySample {
  double t;
  double current;  // A, pack current (sum of the four motors)
  BatteryState state;
};

/// Diagnostic battery trace along a trajectory: per-motor steady-state
/// currents (floored at zero; no regeneration) summed into a pack current,
/// charge integrated with the trapezoid rule between nodes.
std::vector<BatterySample> battery_trace(const Trajectory& traj,
                                         const EfficiencySpec& eff,
                                         const MotorParams& motor,
                                         const BatteryParams& battery);

struct PowerBatteryTrace {
  Eigen::VectorXd power_W;
  Eigen::VectorXd energy_cum_J;
  std::vector<BatterySample> battery;
};

PowerBatteryTrace power_battery_trace(const Trajectory& traj,
                                      const EfficiencySpec& eff,
                                      const MotorParams& motor,
                                      const BatteryParams& battery);

}  // namespace windquad
