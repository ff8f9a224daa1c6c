// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

#include "windquad/ocp.hpp"
#include "windquad/power_energy.hpp"
#include "windquad/quad_model.hpp"
#include "windquad/trajectory.hpp"
#include "windquad/wind_field.hpp"

namespace windquad {

using ControlLaw = std::function<RotorAccel(double t, const State& s)>;
using DisturbanceFn = std::function<Eigen::Vector3d(double t)>;

/// One classical fourth-order Runge-Kutta step of y' = f(t, y).
template <class F>
Eigen::VectorXd rk4_step(const F& f, double t, const Eigen::VectorXd& y,
                         double h) {
  const Eigen::VectorXd k1 = f(t, y);
  const Eigen::VectorXd k2 = f(t + 0.5 * h, (y + 0.5 * h * k1).eval());
  const Eigen::VectorXd k3 = f(t + 0.5 * h, (y + 0.5 * h * k2).eval());
  const Eigen::VectorXd k4 = f(t + h, (y + h * k3).eval());
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct Rollout {
  Trajectory trajectory;
  long saturation_count = 0;  // rotor-speed clamps applied after steps
};

/// Fixed-step RK4 rollout of the vehicle dynamics. The control law is
/// evaluated once per step and held through the stages; wind is sampled at
/// stage times. Rotor speeds are clamped to [0, omega_max] after each step
/// and the clamps counted. Aborts with std::runtime_error when any state
/// magnitude exceeds 1e6. The step count is rounded so the rollout lands on
/// tf exactly.
Rollout rk4_rollout(const State& x_init, const ControlLaw& control,
                    const DisturbanceFn& wind, const QuadrotorParams& p,
                    const Limits& lim, double t0, double tf, double dt);

struct BaselineGains {
  double kp_pos = 2.0;   // 1/s^2
  double kd_pos = 2.5;   // 1/s
  double kp_att = 60.0;  // 1/s^2
  double kd_att = 15.0;  // 1/s
};

struct MinJerkRef {
  Eigen::Vector3d pos, vel, acc;
  double yaw, yaw_rate;
};

/// Quintic minimum-jerk reference between the mission boundary states
/// (position and yaw; rest-to-rest). Held constant outside [t0, tf].
MinJerkRef min_jerk_reference(double t, const MissionSpec& mission);

/// Cascaded tracking controller: PD position loop with gravity feedforward
/// over the minimum-jerk reference, desired attitude extracted from the thrust
/// direction at the reference yaw, PD attitude loop, mixing-map inversion to
/// desired rotor speeds, and a rate command (omega_des - omega) / dt_ctrl
/// clamped to alpha_max. Throws std::domain_error when the demanded thrust
/// direction collapses (nonpositive vertical component).
RotorAccel baseline_controller(double t, const State& s,
                               const MissionSpec& mission,
                               const BaselineGains& gains,
                               const QuadrotorParams& p, const Limits& lim,
                               double dt_ctrl = 0.01);

/// Control law replaying nodal controls: zero-order hold between nodes by
/// default, linear interpolation when first_order_hold is set.
ControlLaw hold_controls(const Trajectory& nodes, bool first_order_hold = false);

/// Percent saved relative to the larger (baseline) energy.
double savings_percent(double e_baseline, double e_optimal);

struct EnergyReport {
  double e_optimal_J = 0.0;
  double e_baseline_J = 0.0;
  double savings_pct = 0.0;
  Eigen::Vector3d optimal_final_position_error = Eigen::Vector3d::Zero();
  Eigen::Vector3d baseline_final_position_error = Eigen::Vector3d::Zero();
  double optimal_final_state_error = 0.0;   // inf-norm over all 16 components
  double baseline_final_state_error = 0.0;
  double baseline_error_threshold_m = 0.3;
  bool baseline_error_exceeded = false;
  double optimal_soc_final_pct = 100.0;
  double baseline_soc_final_pct = 100.0;
  bool wind_enabled = false;
  long baseline_saturations = 0;
  SolveStatus solver_status = SolveStatus::kMaxIter;
  KktReport solver_kkt;
  int solver_outer_iterations = 0;
  Trajectory optimal_trajectory;
  Trajectory baseline_trajectory;
};

/// Solves the optimal control problem, rolls out the baseline tracker on the
/// same model and wind, and measures both trajectories with the same energy
/// functional. The baseline runs pure feedback at 100 Hz with no wind
/// feedforward. Throws SolverError when the optimizer does not converge.
EnergyReport compare_energy(const MissionSpec& mission,
                            const VehicleConfig& vehicle,
                            const std::optional<WindModelParams>& wind,
                            const CollocationGrid& grid,
                            const SolverSettings& solver_settings,
                            const BaselineGains& gains);

}  // namespace windquad
