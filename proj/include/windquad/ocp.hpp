// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <optional>

#include "windquad/nlp.hpp"
#include "windquad/power_energy.hpp"
#include "windquad/quad_model.hpp"
#include "windquad/trajectory.hpp"
#include "windquad/wind_field.hpp"

namespace windquad {

struct MissionSpec {
  State start;  // full state at t0
  State goal;   // full state at tf
  double t0 = 0.0;
  double tf = 10.0;
};

struct CollocationGrid {
  int n_intervals = 100;
  double t0 = 0.0;
  double tf = 10.0;

  double step() const { return (tf - t0) / n_intervals; }
  Eigen::VectorXd node_times() const;
  static CollocationGrid make(const MissionSpec& mission, int n_intervals);
};

struct VehicleConfig {
  QuadrotorParams quad;
  MotorParams motor;
  BatteryParams battery;
  EfficiencySpec efficiency;
  Limits limits;
};

// Decision vector layout: [x_0; u_0; x_1; u_1; ...; x_N; u_N], 20 entries per
// node (16 states followed by 4 controls).
namespace layout {
constexpr int kStateDim = 16;
constexpr int kControlDim = 4;
constexpr int kNodeDim = kStateDim + kControlDim;
inline Eigen::Index state_offset(int node) { return Eigen::Index(node) * kNodeDim; }
inline Eigen::Index control_offset(int node) {
  return Eigen::Index(node) * kNodeDim + kStateDim;
}
inline Eigen::Index num_vars(int n_intervals) {
  return Eigen::Index(kNodeDim) * (n_intervals + 1);
}
}  // namespace layout

struct TranscribedOcp {
  NlpProblem nlp;
  CollocationGrid grid;
  MissionSpec mission;
};

/// Fixed-grid trapezoidal direct collocation. Equality constraints are the
/// 16 * n_intervals interval defects followed by the 32 boundary rows; the
/// boundary-node variables are additionally pinned through the box so the
/// boundary conditions hold exactly. Inequalities are the thrust and torque
/// path constraints (8 per node) evaluated through the mixing map. Wind is
/// sampled at node times. Throws std::invalid_argument for infeasible
/// boundary states or a bad grid.
TranscribedOcp transcribe(const MissionSpec& mission,
                          const CollocationGrid& grid,
                          const VehicleConfig& vehicle,
                          const std::optional<WindModelParams>& wind);

/// Straight-line guess: positions and yaw interpolate linearly, velocities sit
/// at the secant rate, roll/pitch and rates are zero, rotor speeds interpolate
/// between the boundary values, controls are zero. Boundary nodes carry the
/// mission states exactly.
Eigen::VectorXd initial_guess(const MissionSpec& mission,
                              const CollocationGrid& grid);

struct ScaledNlp {
  NlpProblem problem;  // operates on scaled variables
  Eigen::VectorXd var_scale;
  Eigen::VectorXd eq_scale, ineq_scale;
  double objective_scale = 1.0;
};

/// Divides each variable and constraint row by its characteristic magnitude
/// and the objective by its characteristic value. unscale inverts exactly.
ScaledNlp scale(const NlpProblem& physical);
Eigen::VectorXd unscale(const ScaledNlp& scaled, const Eigen::VectorXd& z_scaled);
Eigen::VectorXd scale_vector(const ScaledNlp& scaled, const Eigen::VectorXd& z_physical);

Trajectory decode_decision_vector(const Eigen::VectorXd& z,
                                  const CollocationGrid& grid);

struct GradientCheckReport {
  double objective_error = 0.0;
  double eq_error = 0.0;
  double ineq_error = 0.0;
  double worst() const;
};

/// Central-finite-difference check (step 1e-6 per scaled variable) of the
/// analytic objective gradient and of the constraint Jacobian actions through
/// random direction pairs. Callbacks are evaluated as plain smooth functions;
/// the box plays no role here.
GradientCheckReport check_gradients(const NlpProblem& problem,
                                    const Eigen::VectorXd& z);
GradientCheckReport check_gradients(const NlpProblem& problem,
                                    const Eigen::VectorXd& z,
                                    const Eigen::MatrixXd& directions);

struct SolveResult {
  Trajectory trajectory;
  double objective = 0.0;  // J
  KktReport kkt;           // measures on the scaled problem
  SolveStatus status = SolveStatus::kMaxIter;
  std::vector<OuterIterate> history;
  Multipliers multipliers;
};

/// Scales the problem, solves it, and maps the solution back to physical
/// units, decoding the node trajectory.
SolveResult solve_transcribed(const TranscribedOcp& ocp,
                              const Eigen::VectorXd& z0_physical,
                              const SolverSettings& settings);

}  // namespace windquad
