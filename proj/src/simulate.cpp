// SPDX-License-Identifier: Apache-2.0
#include "windquad/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "windquad/errors.hpp"

namespace windquad {

namespace {

double clamp(double v, double lo, double hi) {
  return std::min(hi, std::max(lo, v));
}

}  // namespace

Rollout rk4_rollout(const State& x_init, const ControlLaw& control,
                    const DisturbanceFn& wind, const QuadrotorParams& p,
                    const Limits& lim, double t0, double tf, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_rollout: dt must be positive");
  if (!(tf > t0)) throw std::invalid_argument("rk4_rollout: tf must exceed t0");
  const long n_steps = std::max(1L, std::lround((tf - t0) / dt));
  const double h = (tf - t0) / double(n_steps);

  Rollout out;
  out.trajectory.reserve(n_steps + 1);
  State x = x_init;

  for (long k = 0; k < n_steps; ++k) {
    const double t = t0 + k * h;
    const RotorAccel u = control(t, x);
    if (!u.allFinite())
      throw std::runtime_error("rk4_rollout: control law returned non-finite values");
    out.trajectory.push_back({t, x, u});

    auto f = [&](double tt, const Eigen::VectorXd& y) -> Eigen::VectorXd {
      return dynamics_rhs(y, u, wind(tt), p);
    };
    x = rk4_step(f, t, x, h);

    for (int j = 0; j < 4; ++j) {
      const double w = x[idx::kW1 + j];
      const double wc = clamp(w, 0.0, lim.omega_max);
      if (wc != w) {
        x[idx::kW1 + j] = wc;
        ++out.saturation_count;
      }
    }
    if (x.cwiseAbs().maxCoeff() > 1e6) {
      throw std::runtime_error("rk4_rollout: state diverged beyond 1e6 at t=" +
                               std::to_string(t + h));
    }
  }
  out.trajectory.push_back({tf, x, control(tf, x)});
  return out;
}

MinJerkRef min_jerk_reference(double t, const MissionSpec& mission) {
  const double duration = mission.tf - mission.t0;
  const double tau = clamp((t - mission.t0) / duration, 0.0, 1.0);
  const double tau2 = tau * tau;
  const double tau3 = tau2 * tau;
  const double s = tau3 * (10.0 - 15.0 * tau + 6.0 * tau2);
  const double sdot = 30.0 * tau2 * (1.0 - 2.0 * tau + tau2) / duration;
  const double sddot =
      (60.0 * tau - 180.0 * tau2 + 120.0 * tau3) / (duration * duration);

  const Eigen::Vector3d p0{mission.start[idx::kX], mission.start[idx::kY],
                           mission.start[idx::kZ]};
  const Eigen::Vector3d pf{mission.goal[idx::kX], mission.goal[idx::kY],
                           mission.goal[idx::kZ]};
  const Eigen::Vector3d d = pf - p0;
  const double yaw0 = mission.start[idx::kPsi];
  const double dyaw = mission.goal[idx::kPsi] - yaw0;

  MinJerkRef ref;
  ref.pos = p0 + s * d;
  ref.vel = sdot * d;
  ref.acc = sddot * d;
  ref.yaw = yaw0 + s * dyaw;
  ref.yaw_rate = sdot * dyaw;
  return ref;
}

RotorAccel baseline_controller(double t, const State& s,
                               const MissionSpec& mission,
                               const BaselineGains& gains,
                               const QuadrotorParams& p, const Limits& lim,
                               double dt_ctrl) {
  const MinJerkRef ref = min_jerk_reference(t, mission);

  const Eigen::Vector3d pos{s[idx::kX], s[idx::kY], s[idx::kZ]};
  const Eigen::Vector3d vel{s[idx::kXDot], s[idx::kYDot], s[idx::kZDot]};

  // Desired specific force: PD on the reference plus gravity feedforward.
  const Eigen::Vector3d a_des = ref.acc + gains.kp_pos * (ref.pos - pos) +
                                gains.kd_pos * (ref.vel - vel) +
                                Eigen::Vector3d{0.0, 0.0, p.gravity};
  if (!(a_des[2] > 0.0))
    throw std::domain_error("baseline_controller: nonpositive vertical thrust demand");

  const double thrust_mag = a_des.norm();
  const double cpsi = std::cos(ref.yaw), spsi = std::sin(ref.yaw);
  const double along = a_des[0] * cpsi + a_des[1] * spsi;   // cphi * sth * |a|
  const double across = a_des[0] * spsi - a_des[1] * cpsi;  // sphi * |a|

  const double phi_des = std::asin(clamp(across / thrust_mag, -1.0, 1.0));
  const double theta_des = std::atan2(along, a_des[2]);
  const double u1_des = p.mass * thrust_mag;

  const double u2_des =
      p.inertia_x * (gains.kp_att * (phi_des - s[idx::kPhi]) -
                     gains.kd_att * s[idx::kPhiDot]);
  const double u3_des =
      p.inertia_y * (gains.kp_att * (theta_des - s[idx::kTheta]) -
                     gains.kd_att * s[idx::kThetaDot]);
  const double u4_des =
      p.inertia_z * (gains.kp_att * (ref.yaw - s[idx::kPsi]) +
                     gains.kd_att * (ref.yaw_rate - s[idx::kPsiDot]));

  // Invert the mixing map for the squared rotor speeds.
  const double sum_sq = u1_des / p.thrust_coeff;
  const double d_roll = u2_des / (p.arm_length * p.thrust_coeff);   // w2^2 - w4^2
  const double d_pitch = u3_des / (p.arm_length * p.thrust_coeff);  // w3^2 - w1^2
  const double d_yaw = u4_des / p.drag_coeff;  // w1^2 - w2^2 + w3^2 - w4^2

  const double odd = 0.5 * (sum_sq + d_yaw);   // w1^2 + w3^2
  const double even = 0.5 * (sum_sq - d_yaw);  // w2^2 + w4^2
  Eigen::Vector4d w_sq;
  w_sq[0] = 0.5 * (odd - d_pitch);
  w_sq[2] = 0.5 * (odd + d_pitch);
  w_sq[1] = 0.5 * (even + d_roll);
  w_sq[3] = 0.5 * (even - d_roll);

  RotorAccel alpha;
  const double w_sq_max = lim.omega_max * lim.omega_max;
  for (int j = 0; j < 4; ++j) {
    const double wd = std::sqrt(clamp(w_sq[j], 0.0, w_sq_max));
    alpha[j] = clamp((wd - s[idx::kW1 + j]) / dt_ctrl, -lim.alpha_max,
                     lim.alpha_max);
  }
  return alpha;
}

ControlLaw hold_controls(const Trajectory& nodes, bool first_order_hold) {
  if (nodes.size() < 2)
    throw std::invalid_argument("hold_controls: need at least two nodes");
  return [nodes, first_order_hold](double t, const State&) -> RotorAccel {
    if (t <= nodes.front().t) return nodes.front().control;
    if (t >= nodes.back().t) return nodes.back().control;
    size_t k = 1;
    while (k < nodes.size() - 1 && nodes[k].t <= t) ++k;
    // nodes[k-1].t <= t < nodes[k].t
    if (!first_order_hold) return nodes[k - 1].control;
    const double span = nodes[k].t - nodes[k - 1].t;
    const double tau = (t - nodes[k - 1].t) / span;
    return (1.0 - tau) * nodes[k - 1].control + tau * nodes[k].control;
  };
}

double savings_percent(double e_baseline, double e_optimal) {
  if (!(e_baseline > 0.0))
    throw std::invalid_argument("savings_percent: baseline energy must be positive");
  return 100.0 * (e_baseline - e_optimal) / e_baseline;
}

EnergyReport compare_energy(const MissionSpec& mission,
                            const VehicleConfig& vehicle,
                            const std::optional<WindModelParams>& wind,
                            const CollocationGrid& grid,
                            const SolverSettings& solver_settings,
                            const BaselineGains& gains) {
  const TranscribedOcp ocp = transcribe(mission, grid, vehicle, wind);
  const Eigen::VectorXd z0 = initial_guess(mission, grid);
  const SolveResult sr = solve_transcribed(ocp, z0, solver_settings);
  if (sr.status != SolveStatus::kConverged) {
    throw SolverError(std::string("optimal control solve did not converge: ") +
                      to_string(sr.status) +
                      " (eq=" + std::to_string(sr.kkt.eq_violation) +
                      ", ineq=" + std::to_string(sr.kkt.ineq_violation) +
                      ", stat=" + std::to_string(sr.kkt.stationarity) + ")");
  }

  const DisturbanceFn wind_fn =
      wind ? DisturbanceFn([w = *wind](double t) { return wind_disturbance(t, w); })
           : DisturbanceFn([](double) { return Eigen::Vector3d::Zero(); });

  const double dt_ctrl = 0.01;  // 100 Hz baseline update
  const ControlLaw baseline_law = [&mission, &gains, &vehicle,
                                   dt_ctrl](double t, const State& s) {
    return baseline_controller(t, s, mission, gains, vehicle.quad,
                               vehicle.limits, dt_ctrl);
  };
  const Rollout baseline = rk4_rollout(mission.start, baseline_law, wind_fn,
                                       vehicle.quad, vehicle.limits, mission.t0,
                                       mission.tf, dt_ctrl);

  EnergyReport report;
  report.optimal_trajectory = sr.trajectory;
  report.baseline_trajectory = baseline.trajectory;
  report.e_optimal_J =
      trajectory_energy(sr.trajectory, vehicle.efficiency, vehicle.motor);
  report.e_baseline_J =
      trajectory_energy(baseline.trajectory, vehicle.efficiency, vehicle.motor);
  report.savings_pct = savings_percent(report.e_baseline_J, report.e_optimal_J);

  const State opt_err = sr.trajectory.back().state - mission.goal;
  const State base_err = baseline.trajectory.back().state - mission.goal;
  report.optimal_final_position_error = {opt_err[idx::kX], opt_err[idx::kY],
                                         opt_err[idx::kZ]};
  report.baseline_final_position_error = {base_err[idx::kX], base_err[idx::kY],
                                          base_err[idx::kZ]};
  report.optimal_final_state_error = opt_err.cwiseAbs().maxCoeff();
  report.baseline_final_state_error = base_err.cwiseAbs().maxCoeff();
  report.baseline_error_exceeded =
      report.baseline_final_position_error.norm() > report.baseline_error_threshold_m;

  const auto opt_batt = battery_trace(sr.trajectory, vehicle.efficiency,
                                      vehicle.motor, vehicle.battery);
  const auto base_batt = battery_trace(baseline.trajectory, vehicle.efficiency,
                                       vehicle.motor, vehicle.battery);
  report.optimal_soc_final_pct = opt_batt.back().state.soc;
  report.baseline_soc_final_pct = base_batt.back().state.soc;

  report.wind_enabled = wind.has_value();
  report.baseline_saturations = baseline.saturation_count;
  report.solver_status = sr.status;
  report.solver_kkt = sr.kkt;
  report.solver_outer_iterations = int(sr.history.size());
  return report;
}

}  // namespace windquad
