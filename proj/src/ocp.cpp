// SPDX-License-Identifier: Apache-2.0
#include "windquad/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace windquad {

using Eigen::VectorXd;
using layout::control_offset;
using layout::kControlDim;
using layout::kNodeDim;
using layout::kStateDim;
using layout::state_offset;

Eigen::VectorXd CollocationGrid::node_times() const {
  return VectorXd::LinSpaced(n_intervals + 1, t0, tf);
}

CollocationGrid CollocationGrid::make(const MissionSpec& mission,
                                      int n_intervals) {
  CollocationGrid g;
  g.n_intervals = n_intervals;
  g.t0 = mission.t0;
  g.tf = mission.tf;
  return g;
}

namespace {

// Wide but finite boxes for the variables the path constraints leave free.
constexpr double kPositionBound = 1e3;   // m
constexpr double kVelocityBound = 1e2;   // m/s
constexpr double kRateBound = 1e2;       // rad/s

void check_grid(const MissionSpec& mission, const CollocationGrid& grid) {
  if (grid.n_intervals < 2)
    throw std::invalid_argument("grid.n_intervals must be at least 2");
  if (!(mission.tf > mission.t0))
    throw std::invalid_argument("mission.tf must exceed mission.t0");
  if (std::abs(grid.t0 - mission.t0) > 1e-12 ||
      std::abs(grid.tf - mission.tf) > 1e-12)
    throw std::invalid_argument("grid does not span the mission time window");
}

VectorXd node_scale(const MissionSpec& mission, const Limits& lim) {
  const double duration = mission.tf - mission.t0;
  Eigen::Vector3d displacement{mission.goal[idx::kX] - mission.start[idx::kX],
                               mission.goal[idx::kY] - mission.start[idx::kY],
                               mission.goal[idx::kZ] - mission.start[idx::kZ]};
  const double pos_char = std::max(1.0, displacement.cwiseAbs().maxCoeff());
  const double vel_char = std::max(1.0, 2.0 * pos_char / duration);
  const double angle_char = M_PI / 2.0;
  const double rate_char = M_PI;

  VectorXd s(kNodeDim);
  s[idx::kX] = s[idx::kY] = s[idx::kZ] = pos_char;
  s[idx::kXDot] = s[idx::kYDot] = s[idx::kZDot] = vel_char;
  s[idx::kPhi] = s[idx::kTheta] = s[idx::kPsi] = angle_char;
  s[idx::kPhiDot] = s[idx::kThetaDot] = s[idx::kPsiDot] = rate_char;
  s[idx::kW1] = s[idx::kW2] = s[idx::kW3] = s[idx::kW4] = lim.omega_max;
  s.tail<kControlDim>().setConstant(lim.alpha_max);
  return s;
}

}  // namespace

TranscribedOcp transcribe(const MissionSpec& mission,
                          const CollocationGrid& grid,
                          const VehicleConfig& vehicle,
                          const std::optional<WindModelParams>& wind) {
  check_grid(mission, grid);
  validate(vehicle.quad);
  try {
    validate_state(mission.start, vehicle.limits);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("mission start state: ") + e.what());
  }
  try {
    validate_state(mission.goal, vehicle.limits);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("mission goal state: ") + e.what());
  }

  const int N = grid.n_intervals;
  const double h = grid.step();
  const VectorXd times = grid.node_times();

  std::vector<Eigen::Vector3d> disturbance(N + 1, Eigen::Vector3d::Zero());
  if (wind) {
    for (int i = 0; i <= N; ++i)
      disturbance[i] = wind_disturbance(times[i], *wind);
  }

  const QuadrotorParams quad = vehicle.quad;
  const MotorParams motor = vehicle.motor;
  const EfficiencySpec eff = vehicle.efficiency;
  const Limits lim = vehicle.limits;
  const State x0 = mission.start;
  const State xf = mission.goal;

  TranscribedOcp out;
  out.grid = grid;
  out.mission = mission;
  NlpProblem& nlp = out.nlp;

  nlp.num_vars = layout::num_vars(N);
  nlp.num_eq = Eigen::Index(kStateDim) * N + 2 * kStateDim;
  nlp.num_ineq = Eigen::Index(8) * (N + 1);

  // Box bounds; boundary-node states are pinned to the mission states.
  nlp.lower.resize(nlp.num_vars);
  nlp.upper.resize(nlp.num_vars);
  const double psi_bound =
      std::max({4.0 * M_PI, std::abs(x0[idx::kPsi]) + 2.0 * M_PI,
                std::abs(xf[idx::kPsi]) + 2.0 * M_PI});
  for (int i = 0; i <= N; ++i) {
    const Eigen::Index so = state_offset(i);
    auto lo = nlp.lower.segment<kStateDim>(so);
    auto hi = nlp.upper.segment<kStateDim>(so);
    lo[idx::kX] = lo[idx::kY] = lo[idx::kZ] = -kPositionBound;
    hi[idx::kX] = hi[idx::kY] = hi[idx::kZ] = kPositionBound;
    lo[idx::kXDot] = lo[idx::kYDot] = lo[idx::kZDot] = -kVelocityBound;
    hi[idx::kXDot] = hi[idx::kYDot] = hi[idx::kZDot] = kVelocityBound;
    lo[idx::kPhi] = lo[idx::kTheta] = -lim.angle_max;
    hi[idx::kPhi] = hi[idx::kTheta] = lim.angle_max;
    lo[idx::kPsi] = -psi_bound;
    hi[idx::kPsi] = psi_bound;
    lo[idx::kPhiDot] = lo[idx::kThetaDot] = lo[idx::kPsiDot] = -kRateBound;
    hi[idx::kPhiDot] = hi[idx::kThetaDot] = hi[idx::kPsiDot] = kRateBound;
    for (int j = 0; j < 4; ++j) {
      lo[idx::kW1 + j] = 0.0;
      hi[idx::kW1 + j] = lim.omega_max;
    }
    nlp.lower.segment<kControlDim>(control_offset(i)).setConstant(-lim.alpha_max);
    nlp.upper.segment<kControlDim>(control_offset(i)).setConstant(lim.alpha_max);
  }
  nlp.lower.segment<kStateDim>(state_offset(0)) = x0;
  nlp.upper.segment<kStateDim>(state_offset(0)) = x0;
  nlp.lower.segment<kStateDim>(state_offset(N)) = xf;
  nlp.upper.segment<kStateDim>(state_offset(N)) = xf;

  // Trapezoidal quadrature weights for the energy objective.
  auto node_weight = [N, h](int i) { return (i == 0 || i == N) ? 0.5 * h : h; };

  nlp.objective = [=](const VectorXd& z) {
    double total = 0.0;
    for (int i = 0; i <= N; ++i) {
      const RotorSpeeds w = z.segment<4>(state_offset(i) + idx::kW1);
      const RotorAccel a = z.segment<4>(control_offset(i));
      total += node_weight(i) * power_integrand(w, a, eff, motor);
    }
    return total;
  };

  nlp.objective_gradient = [=](const VectorXd& z) {
    VectorXd g = VectorXd::Zero(z.size());
    Eigen::Vector4d dw, da;
    for (int i = 0; i <= N; ++i) {
      const RotorSpeeds w = z.segment<4>(state_offset(i) + idx::kW1);
      const RotorAccel a = z.segment<4>(control_offset(i));
      power_integrand_partials(w, a, eff, motor, dw, da);
      g.segment<4>(state_offset(i) + idx::kW1) = node_weight(i) * dw;
      g.segment<4>(control_offset(i)) = node_weight(i) * da;
    }
    return g;
  };

  nlp.equality = [=](const VectorXd& z) {
    VectorXd c(Eigen::Index(kStateDim) * N + 2 * kStateDim);
    std::vector<State> f(N + 1);
    for (int i = 0; i <= N; ++i) {
      const State xi = z.segment<kStateDim>(state_offset(i));
      const RotorAccel ui = z.segment<kControlDim>(control_offset(i));
      f[i] = dynamics_rhs(xi, ui, disturbance[i], quad);
    }
    for (int k = 0; k < N; ++k) {
      c.segment<kStateDim>(Eigen::Index(kStateDim) * k) =
          z.segment<kStateDim>(state_offset(k + 1)) -
          z.segment<kStateDim>(state_offset(k)) - 0.5 * h * (f[k] + f[k + 1]);
    }
    c.segment<kStateDim>(Eigen::Index(kStateDim) * N) =
        z.segment<kStateDim>(state_offset(0)) - x0;
    c.segment<kStateDim>(Eigen::Index(kStateDim) * N + kStateDim) =
        z.segment<kStateDim>(state_offset(N)) - xf;
    return c;
  };

  nlp.equality_jac_tvp = [=](const VectorXd& z, const VectorXd& v) {
    VectorXd g = VectorXd::Zero(z.size());
    for (int i = 0; i <= N; ++i) {
      const State xi = z.segment<kStateDim>(state_offset(i));
      const DynamicsJacobians J = dynamics_jacobians(xi, quad);
      State vsum = State::Zero();
      if (i < N) vsum += v.segment<kStateDim>(Eigen::Index(kStateDim) * i);
      if (i > 0) vsum += v.segment<kStateDim>(Eigen::Index(kStateDim) * (i - 1));
      g.segment<kStateDim>(state_offset(i)).noalias() -=
          0.5 * h * (J.dstate.transpose() * vsum);
      g.segment<kControlDim>(control_offset(i)).noalias() -=
          0.5 * h * (J.dcontrol.transpose() * vsum);
      if (i < N)
        g.segment<kStateDim>(state_offset(i)) -=
            v.segment<kStateDim>(Eigen::Index(kStateDim) * i);
      if (i > 0)
        g.segment<kStateDim>(state_offset(i)) +=
            v.segment<kStateDim>(Eigen::Index(kStateDim) * (i - 1));
    }
    g.segment<kStateDim>(state_offset(0)) +=
        v.segment<kStateDim>(Eigen::Index(kStateDim) * N);
    g.segment<kStateDim>(state_offset(N)) +=
        v.segment<kStateDim>(Eigen::Index(kStateDim) * N + kStateDim);
    return g;
  };

  nlp.inequality = [=](const VectorXd& z) {
    VectorXd gi(Eigen::Index(8) * (N + 1));
    for (int i = 0; i <= N; ++i) {
      const RotorSpeeds w = z.segment<4>(state_offset(i) + idx::kW1);
      const Wrench u = wrench_of(w, quad);
      const Eigen::Index o = Eigen::Index(8) * i;
      gi[o + 0] = u.thrust - lim.thrust_max;
      gi[o + 1] = -u.thrust;
      gi[o + 2] = u.tau_roll - lim.torque_max;
      gi[o + 3] = -u.tau_roll - lim.torque_max;
      gi[o + 4] = u.tau_pitch - lim.torque_max;
      gi[o + 5] = -u.tau_pitch - lim.torque_max;
      gi[o + 6] = u.tau_yaw - lim.torque_max;
      gi[o + 7] = -u.tau_yaw - lim.torque_max;
    }
    return gi;
  };

  nlp.inequality_jac_tvp = [=](const VectorXd& z, const VectorXd& v) {
    VectorXd g = VectorXd::Zero(z.size());
    const double lb = quad.arm_length * quad.thrust_coeff;
    for (int i = 0; i <= N; ++i) {
      const RotorSpeeds w = z.segment<4>(state_offset(i) + idx::kW1);
      const Eigen::Index o = Eigen::Index(8) * i;
      const double y_thrust = v[o + 0] - v[o + 1];
      const double y_roll = v[o + 2] - v[o + 3];
      const double y_pitch = v[o + 4] - v[o + 5];
      const double y_yaw = v[o + 6] - v[o + 7];
      Eigen::Vector4d gw;
      gw[0] = 2.0 * w[0] * (quad.thrust_coeff * y_thrust - lb * y_pitch +
                            quad.drag_coeff * y_yaw);
      gw[1] = 2.0 * w[1] * (quad.thrust_coeff * y_thrust + lb * y_roll -
                            quad.drag_coeff * y_yaw);
      gw[2] = 2.0 * w[2] * (quad.thrust_coeff * y_thrust + lb * y_pitch +
                            quad.drag_coeff * y_yaw);
      gw[3] = 2.0 * w[3] * (quad.thrust_coeff * y_thrust - lb * y_roll -
                            quad.drag_coeff * y_yaw);
      g.segment<4>(state_offset(i) + idx::kW1) += gw;
    }
    return g;
  };

  nlp.equality_jac_vec = [=](const VectorXd& z, const VectorXd& v) {
    VectorXd out(Eigen::Index(kStateDim) * N + 2 * kStateDim);
    std::vector<State> jv(N + 1);
    for (int i = 0; i <= N; ++i) {
      const State xi = z.segment<kStateDim>(state_offset(i));
      const DynamicsJacobians J = dynamics_jacobians(xi, quad);
      jv[i] = J.dstate * v.segment<kStateDim>(state_offset(i)) +
              J.dcontrol * v.segment<kControlDim>(control_offset(i));
    }
    for (int k = 0; k < N; ++k) {
      out.segment<kStateDim>(Eigen::Index(kStateDim) * k) =
          v.segment<kStateDim>(state_offset(k + 1)) -
          v.segment<kStateDim>(state_offset(k)) - 0.5 * h * (jv[k] + jv[k + 1]);
    }
    out.segment<kStateDim>(Eigen::Index(kStateDim) * N) =
        v.segment<kStateDim>(state_offset(0));
    out.segment<kStateDim>(Eigen::Index(kStateDim) * N + kStateDim) =
        v.segment<kStateDim>(state_offset(N));
    return out;
  };

  nlp.inequality_jac_vec = [=](const VectorXd& z, const VectorXd& v) {
    VectorXd out(Eigen::Index(8) * (N + 1));
    const double lb = quad.arm_length * quad.thrust_coeff;
    for (int i = 0; i <= N; ++i) {
      const RotorSpeeds w = z.segment<4>(state_offset(i) + idx::kW1);
      const Eigen::Vector4d vw = v.segment<4>(state_offset(i) + idx::kW1);
      const double d_thrust =
          2.0 * quad.thrust_coeff *
          (w[0] * vw[0] + w[1] * vw[1] + w[2] * vw[2] + w[3] * vw[3]);
      const double d_roll = 2.0 * lb * (w[1] * vw[1] - w[3] * vw[3]);
      const double d_pitch = 2.0 * lb * (w[2] * vw[2] - w[0] * vw[0]);
      const double d_yaw = 2.0 * quad.drag_coeff *
                           (w[0] * vw[0] - w[1] * vw[1] + w[2] * vw[2] -
                            w[3] * vw[3]);
      const Eigen::Index o = Eigen::Index(8) * i;
      out[o + 0] = d_thrust;
      out[o + 1] = -d_thrust;
      out[o + 2] = d_roll;
      out[o + 3] = -d_roll;
      out[o + 4] = d_pitch;
      out[o + 5] = -d_pitch;
      out[o + 6] = d_yaw;
      out[o + 7] = -d_yaw;
    }
    return out;
  };

  nlp.objective_hess_diag = [=](const VectorXd& z) {
    VectorXd d = VectorXd::Zero(z.size());
    for (int i = 0; i <= N; ++i) {
      const RotorSpeeds w = z.segment<4>(state_offset(i) + idx::kW1);
      const RotorAccel a = z.segment<4>(control_offset(i));
      for (int j = 0; j < 4; ++j) {
        const double raw =
            (motor.rotor_inertia * a[j] + motor.drag_coeff * w[j] * w[j]) * w[j];
        if (raw <= 0.0) continue;
        const double fr = efficiency(a[j], w[j], eff);
        d[state_offset(i) + idx::kW1 + j] =
            node_weight(i) * 6.0 * motor.drag_coeff * w[j] / fr;
      }
    }
    return d.cwiseMax(0.0);
  };

  // Characteristic magnitudes.
  const VectorXd per_node = node_scale(mission, lim);
  nlp.var_scale.resize(nlp.num_vars);
  for (int i = 0; i <= N; ++i)
    nlp.var_scale.segment<kNodeDim>(Eigen::Index(i) * kNodeDim) = per_node;

  nlp.eq_scale.resize(nlp.num_eq);
  for (int k = 0; k < N; ++k)
    nlp.eq_scale.segment<kStateDim>(Eigen::Index(kStateDim) * k) =
        per_node.head<kStateDim>();
  nlp.eq_scale.segment<kStateDim>(Eigen::Index(kStateDim) * N) =
      per_node.head<kStateDim>();
  nlp.eq_scale.segment<kStateDim>(Eigen::Index(kStateDim) * N + kStateDim) =
      per_node.head<kStateDim>();

  nlp.ineq_scale.resize(nlp.num_ineq);
  for (int i = 0; i <= N; ++i) {
    const Eigen::Index o = Eigen::Index(8) * i;
    nlp.ineq_scale[o + 0] = nlp.ineq_scale[o + 1] = lim.thrust_max;
    for (int r = 2; r < 8; ++r) nlp.ineq_scale[o + r] = lim.torque_max;
  }

  const RotorSpeeds hover = RotorSpeeds::Constant(hover_speed(quad));
  nlp.objective_scale =
      std::max(1.0, (mission.tf - mission.t0) *
                        power_integrand(hover, RotorAccel::Zero(), eff, motor));
  return out;
}

Eigen::VectorXd initial_guess(const MissionSpec& mission,
                              const CollocationGrid& grid) {
  check_grid(mission, grid);
  const int N = grid.n_intervals;
  const double duration = mission.tf - mission.t0;
  const State& x0 = mission.start;
  const State& xf = mission.goal;

  VectorXd z = VectorXd::Zero(layout::num_vars(N));
  for (int i = 0; i <= N; ++i) {
    const double tau = double(i) / N;
    State s = State::Zero();
    for (int c : {idx::kX, idx::kY, idx::kZ, idx::kPsi})
      s[c] = (1.0 - tau) * x0[c] + tau * xf[c];
    s[idx::kXDot] = (xf[idx::kX] - x0[idx::kX]) / duration;
    s[idx::kYDot] = (xf[idx::kY] - x0[idx::kY]) / duration;
    s[idx::kZDot] = (xf[idx::kZ] - x0[idx::kZ]) / duration;
    s[idx::kPsiDot] = (xf[idx::kPsi] - x0[idx::kPsi]) / duration;
    for (int j = 0; j < 4; ++j)
      s[idx::kW1 + j] = (1.0 - tau) * x0[idx::kW1 + j] + tau * xf[idx::kW1 + j];
    z.segment<kStateDim>(state_offset(i)) = s;
  }
  z.segment<kStateDim>(state_offset(0)) = x0;
  z.segment<kStateDim>(state_offset(N)) = xf;
  return z;
}

ScaledNlp scale(const NlpProblem& physical) {
  const Eigen::Index n = physical.num_vars;
  ScaledNlp out;
  out.var_scale = physical.var_scale.size() == n ? physical.var_scale
                                                 : VectorXd::Ones(n);
  out.eq_scale = physical.eq_scale.size() == physical.num_eq
                     ? physical.eq_scale
                     : VectorXd::Ones(physical.num_eq);
  out.ineq_scale = physical.ineq_scale.size() == physical.num_ineq
                       ? physical.ineq_scale
                       : VectorXd::Ones(physical.num_ineq);
  out.objective_scale = physical.objective_scale > 0 ? physical.objective_scale : 1.0;

  const VectorXd S = out.var_scale;
  const VectorXd DE = out.eq_scale;
  const VectorXd DI = out.ineq_scale;
  const double F = out.objective_scale;

  NlpProblem& p = out.problem;
  p.num_vars = n;
  p.num_eq = physical.num_eq;
  p.num_ineq = physical.num_ineq;
  p.lower = physical.lower.cwiseQuotient(S);
  p.upper = physical.upper.cwiseQuotient(S);
  p.var_scale = VectorXd::Ones(n);
  p.eq_scale = VectorXd::Ones(p.num_eq);
  p.ineq_scale = VectorXd::Ones(p.num_ineq);
  p.objective_scale = 1.0;

  p.objective = [f = physical.objective, S, F](const VectorXd& zs) {
    return f(S.cwiseProduct(zs)) / F;
  };
  if (physical.equality)
    p.equality = [c = physical.equality, S, DE](const VectorXd& zs) {
      return c(S.cwiseProduct(zs)).cwiseQuotient(DE).eval();
    };
  if (physical.inequality)
    p.inequality = [c = physical.inequality, S, DI](const VectorXd& zs) {
      return c(S.cwiseProduct(zs)).cwiseQuotient(DI).eval();
    };
  if (physical.objective_gradient)
    p.objective_gradient = [g = physical.objective_gradient, S,
                            F](const VectorXd& zs) {
      return S.cwiseProduct(g(S.cwiseProduct(zs))).eval() / F;
    };
  if (physical.equality_jac_tvp)
    p.equality_jac_tvp = [j = physical.equality_jac_tvp, S,
                          DE](const VectorXd& zs, const VectorXd& v) {
      return S.cwiseProduct(j(S.cwiseProduct(zs), v.cwiseQuotient(DE))).eval();
    };
  if (physical.inequality_jac_tvp)
    p.inequality_jac_tvp = [j = physical.inequality_jac_tvp, S,
                            DI](const VectorXd& zs, const VectorXd& v) {
      return S.cwiseProduct(j(S.cwiseProduct(zs), v.cwiseQuotient(DI))).eval();
    };
  if (physical.equality_jac_vec)
    p.equality_jac_vec = [j = physical.equality_jac_vec, S,
                          DE](const VectorXd& zs, const VectorXd& v) {
      return j(S.cwiseProduct(zs), S.cwiseProduct(v)).cwiseQuotient(DE).eval();
    };
  if (physical.inequality_jac_vec)
    p.inequality_jac_vec = [j = physical.inequality_jac_vec, S,
                            DI](const VectorXd& zs, const VectorXd& v) {
      return j(S.cwiseProduct(zs), S.cwiseProduct(v)).cwiseQuotient(DI).eval();
    };
  if (physical.objective_hess_diag)
    p.objective_hess_diag = [hd = physical.objective_hess_diag, S,
                             F](const VectorXd& zs) {
      return S.cwiseAbs2().cwiseProduct(hd(S.cwiseProduct(zs))).eval() / F;
    };
  return out;
}

Eigen::VectorXd unscale(const ScaledNlp& scaled, const Eigen::VectorXd& z_scaled) {
  return scaled.var_scale.cwiseProduct(z_scaled);
}

Eigen::VectorXd scale_vector(const ScaledNlp& scaled,
                             const Eigen::VectorXd& z_physical) {
  return z_physical.cwiseQuotient(scaled.var_scale);
}

Trajectory decode_decision_vector(const Eigen::VectorXd& z,
                                  const CollocationGrid& grid) {
  const int N = grid.n_intervals;
  if (z.size() != layout::num_vars(N))
    throw std::invalid_argument("decision vector size does not match the grid");
  const VectorXd times = grid.node_times();
  Trajectory traj(N + 1);
  for (int i = 0; i <= N; ++i) {
    traj[i].t = times[i];
    traj[i].state = z.segment<kStateDim>(state_offset(i));
    traj[i].control = z.segment<kControlDim>(control_offset(i));
  }
  return traj;
}

double GradientCheckReport::worst() const {
  return std::max({objective_error, eq_error, ineq_error});
}

GradientCheckReport check_gradients(const NlpProblem& problem,
                                    const Eigen::VectorXd& z) {
  constexpr int kDirections = 8;
  std::mt19937 rng(20240517u);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd dirs(z.size(), kDirections);
  for (Eigen::Index c = 0; c < kDirections; ++c) {
    for (Eigen::Index r = 0; r < z.size(); ++r) dirs(r, c) = normal(rng);
    dirs.col(c).normalize();
  }
  return check_gradients(problem, z, dirs);
}

GradientCheckReport check_gradients(const NlpProblem& problem,
                                    const Eigen::VectorXd& z,
                                    const Eigen::MatrixXd& directions) {
  GradientCheckReport report;
  const double h = 1e-6;

  if (problem.objective_gradient) {
    const VectorXd g = problem.objective_gradient(z);
    const double denom = std::max(1.0, g.cwiseAbs().maxCoeff());
    VectorXd zp = z;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double hi = h * std::max(1.0, std::abs(z[i]));
      const double zi = z[i];
      zp[i] = zi + hi;
      const double fp = problem.objective(zp);
      zp[i] = zi - hi;
      const double fm = problem.objective(zp);
      zp[i] = zi;
      worst = std::max(worst, std::abs((fp - fm) / (2.0 * hi) - g[i]));
    }
    report.objective_error = worst / denom;
  }

  auto check_jacobian =
      [&](const std::function<VectorXd(const VectorXd&)>& constraint,
          const std::function<VectorXd(const VectorXd&, const VectorXd&)>& jtv,
          Eigen::Index rows) {
        double worst = 0.0;
        std::mt19937 rng(911u);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index c = 0; c < directions.cols(); ++c) {
          const VectorXd v = directions.col(c);
          const VectorXd cp = constraint((z + h * v).eval());
          const VectorXd cm = constraint((z - h * v).eval());
          const VectorXd jv_fd = (cp - cm) / (2.0 * h);
          VectorXd w(rows);
          for (Eigen::Index r = 0; r < rows; ++r) w[r] = normal(rng);
          w.normalize();
          const double lhs = w.dot(jv_fd);
          const double rhs = jtv(z, w).dot(v);
          worst = std::max(worst, std::abs(lhs - rhs) /
                                      std::max({1.0, std::abs(lhs), std::abs(rhs)}));
        }
        return worst;
      };

  if (problem.num_eq > 0 && problem.equality_jac_tvp)
    report.eq_error =
        check_jacobian(problem.equality, problem.equality_jac_tvp, problem.num_eq);
  if (problem.num_ineq > 0 && problem.inequality_jac_tvp)
    report.ineq_error = check_jacobian(problem.inequality,
                                       problem.inequality_jac_tvp, problem.num_ineq);
  return report;
}

SolveResult solve_transcribed(const TranscribedOcp& ocp,
                              const Eigen::VectorXd& z0_physical,
                              const SolverSettings& settings) {
  const ScaledNlp scaled = scale(ocp.nlp);
  const NlpSolution sol =
      solve(scaled.problem, scale_vector(scaled, z0_physical), settings);
  const VectorXd z_physical = unscale(scaled, sol.z);

  SolveResult result;
  result.trajectory = decode_decision_vector(z_physical, ocp.grid);
  result.objective = ocp.nlp.objective(z_physical);
  result.kkt = sol.kkt;
  result.status = sol.status;
  result.history = sol.history;
  result.multipliers = sol.multipliers;
  return result;
}

}  // namespace windquad
