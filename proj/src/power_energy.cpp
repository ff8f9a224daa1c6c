// SPDX-License-Identifier: Apache-2.0
#include "windquad/power_energy.hpp"

#include <cmath>
#include <stdexcept>

namespace windquad {

namespace {

double clamp_efficiency(double raw, const EfficiencySpec& eff) {
  return std::min(1.0, std::max(eff.clamp_floor, raw));
}

double poly_eval(double a, double w, const Eigen::MatrixXd& c) {
  double total = 0.0;
  double ai = 1.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    double wj = 1.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      total += c(i, j) * ai * wj;
      wj *= w;
    }
    ai *= a;
  }
  return total;
}

void check_time_grid(const Trajectory& traj) {
  if (traj.size() < 2)
    throw std::invalid_argument("trajectory needs at least two samples");
  for (size_t k = 1; k < traj.size(); ++k) {
    if (!(traj[k].t > traj[k - 1].t))
      throw std::invalid_argument("trajectory timestamps must be strictly increasing");
  }
}

}  // namespace

double efficiency(double omega_dot, double omega, const EfficiencySpec& eff) {
  if (eff.mode == EfficiencyMode::kConstant)
    return clamp_efficiency(eff.constant_value, eff);
  return clamp_efficiency(poly_eval(omega_dot, omega, eff.poly_coeffs), eff);
}

Eigen::Vector2d efficiency_partials(double omega_dot, double omega,
                                    const EfficiencySpec& eff) {
  if (eff.mode == EfficiencyMode::kConstant) return Eigen::Vector2d::Zero();
  const double raw = poly_eval(omega_dot, omega, eff.poly_coeffs);
  if (raw <= eff.clamp_floor || raw >= 1.0) return Eigen::Vector2d::Zero();
  const Eigen::MatrixXd& c = eff.poly_coeffs;
  double da = 0.0, dw = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (i > 0)
        da += c(i, j) * double(i) * std::pow(omega_dot, double(i - 1)) *
              std::pow(omega, double(j));
      if (j > 0)
        dw += c(i, j) * std::pow(omega_dot, double(i)) * double(j) *
              std::pow(omega, double(j - 1));
    }
  }
  return {da, dw};
}

MotorSteadyState motor_steady_state(double omega, double omega_dot,
                                    const MotorParams& p) {
  if (p.torque_constant == 0.0)
    throw std::invalid_argument("torque_constant must be nonzero");
  MotorSteadyState m;
  m.torque = p.rotor_inertia * omega_dot + p.drag_coeff * omega * omega;
  m.current = m.torque / p.torque_constant;
  m.voltage = p.resistance * m.current + omega / p.speed_constant;
  return m;
}

double power_integrand(const RotorSpeeds& w, const RotorAccel& a,
                       const EfficiencySpec& eff, const MotorParams& p) {
  double total = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double raw =
        (p.rotor_inertia * a[j] + p.drag_coeff * w[j] * w[j]) * w[j];
    if (raw <= 0.0) continue;
    total += raw / efficiency(a[j], w[j], eff);
  }
  return total;
}

void power_integrand_partials(const RotorSpeeds& w, const RotorAccel& a,
                              const EfficiencySpec& eff, const MotorParams& p,
                              Eigen::Ref<Eigen::Vector4d> dP_dw,
                              Eigen::Ref<Eigen::Vector4d> dP_da) {
  dP_dw.setZero();
  dP_da.setZero();
  for (int j = 0; j < 4; ++j) {
    const double raw =
        (p.rotor_inertia * a[j] + p.drag_coeff * w[j] * w[j]) * w[j];
    if (raw <= 0.0) continue;
    const double fr = efficiency(a[j], w[j], eff);
    const Eigen::Vector2d dfr = efficiency_partials(a[j], w[j], eff);
    const double draw_dw =
        p.rotor_inertia * a[j] + 3.0 * p.drag_coeff * w[j] * w[j];
    const double draw_da = p.rotor_inertia * w[j];
    dP_dw[j] = draw_dw / fr - raw * dfr[1] / (fr * fr);
    dP_da[j] = draw_da / fr - raw * dfr[0] / (fr * fr);
  }
}

double trajectory_energy(const Trajectory& traj, const EfficiencySpec& eff,
                         const MotorParams& p) {
  check_time_grid(traj);
  double energy = 0.0;
  double prev_power =
      power_integrand(traj[0].state.tail<4>(), traj[0].control, eff, p);
  for (size_t k = 1; k < traj.size(); ++k) {
    const double power =
        power_integrand(traj[k].state.tail<4>(), traj[k].control, eff, p);
    energy += 0.5 * (traj[k].t - traj[k - 1].t) * (prev_power + power);
    prev_power = power;
  }
  return energy;
}

Eigen::VectorXd cumulative_energy(const Trajectory& traj,
                                  const EfficiencySpec& eff,
                                  const MotorParams& p) {
  check_time_grid(traj);
  Eigen::VectorXd cum(traj.size());
  cum[0] = 0.0;
  double prev_power =
      power_integrand(traj[0].state.tail<4>(), traj[0].control, eff, p);
  for (size_t k = 1; k < traj.size(); ++k) {
    const double power =
        power_integrand(traj[k].state.tail<4>(), traj[k].control, eff, p);
    cum[k] = cum[k - 1] + 0.5 * (traj[k].t - traj[k - 1].t) * (prev_power + power);
    prev_power = power;
  }
  return cum;
}

BatteryState battery_eval(double charge_drawn, double current,
                          const BatteryParams& p) {
  if (!(charge_drawn < p.capacity))
    throw std::domain_error("battery depleted: drawn charge reached capacity");
  BatteryState bs;
  bs.charge_drawn = charge_drawn;
  bs.soc = 100.0 * (1.0 - charge_drawn / p.capacity);
  bs.open_circuit_voltage =
      p.full_voltage - p.bias_voltage * (p.capacity / (p.capacity - charge_drawn)) +
      p.exp_voltage * std::exp(-p.exp_capacity * charge_drawn);
  bs.terminal_voltage = bs.open_circuit_voltage - p.resistance * current;
  return bs;
}

BatteryState battery_step(const BatteryState& bs, double current, double dt,
                          const BatteryParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("battery_step: dt must be positive");
  const double next_charge = bs.charge_drawn + current * dt / 3600.0;
  return battery_eval(next_charge, current, p);
}

std::vector<BatterySample> battery_trace(const Trajectory& traj,
                                         const EfficiencySpec& /*eff*/,
                                         const MotorParams& motor,
                                         const BatteryParams& battery) {
  check_time_grid(traj);
  std::vector<BatterySample> out;
  out.reserve(traj.size());

  auto pack_current = [&](const TrajectoryPoint& pt) {
    double total = 0.0;
    for (int j = 0; j < 4; ++j) {
      const MotorSteadyState m =
          motor_steady_state(pt.state[idx::kW1 + j], pt.control[j], motor);
      total += std::max(0.0, m.current);
    }
    return total;
  };

  double charge = 0.0;
  double prev_current = pack_current(traj[0]);
  out.push_back({traj[0].t, prev_current, battery_eval(charge, prev_current, battery)});
  for (size_t k = 1; k < traj.size(); ++k) {
    const double current = pack_current(traj[k]);
    const double dt = traj[k].t - traj[k - 1].t;
    charge += 0.5 * (prev_current + current) * dt / 3600.0;
    out.push_back({traj[k].t, current, battery_eval(charge, current, battery)});
    prev_current = current;
  }
  return out;
}

PowerBatteryTrace power_battery_trace(const Trajectory& traj,
                                      const EfficiencySpec& eff,
                                      const MotorParams& motor,
                                      const BatteryParams& battery) {
  PowerBatteryTrace trace;
  trace.power_W.resize(traj.size());
  for (size_t k = 0; k < traj.size(); ++k) {
    trace.power_W[k] =
        power_integrand(traj[k].state.tail<4>(), traj[k].control, eff, motor);
  }
  trace.energy_cum_J = cumulative_energy(traj, eff, motor);
  trace.battery = battery_trace(traj, eff, motor, battery);
  return trace;
}

}  // namespace windquad
