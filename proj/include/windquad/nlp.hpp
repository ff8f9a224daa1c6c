// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <vector>

namespace windquad {

/// A box-constrained nonlinear program
///
///   min f(z)  s.t.  c_eq(z) = 0,  c_ineq(z) <= 0,  lower <= z <= upper.
///
/// The solver touches the problem only through these callbacks. The analytic
/// derivative callbacks are optional; when absent the solver falls back to
/// central finite differences (step 1e-6 on scaled variables). The *_jac_tvp
/// callbacks compute transposed Jacobian-vector products J^T v.
struct NlpProblem {
  Eigen::Index num_vars = 0;
  Eigen::VectorXd lower, upper;
  Eigen::Index num_eq = 0;
  Eigen::Index num_ineq = 0;

  std::function<double(const Eigen::VectorXd&)> objective;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> equality;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> inequality;

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> objective_gradient;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      equality_jac_tvp;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      inequality_jac_tvp;

  // Forward Jacobian-vector products J v and a diagonal PSD approximation of
  // the objective Hessian. When present the inner minimizer upgrades from
  // limited-memory quasi-Newton to an inexact Gauss-Newton step solved by
  // preconditioned conjugate gradients.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      equality_jac_vec;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      inequality_jac_vec;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> objective_hess_diag;

  // Characteristic magnitudes used by scale(); identity when empty.
  Eigen::VectorXd var_scale;
  Eigen::VectorXd eq_scale, ineq_scale;
  double objective_scale = 1.0;

  bool has_analytic_derivatives() const {
    return static_cast<bool>(objective_gradient) &&
           (num_eq == 0 || static_cast<bool>(equality_jac_tvp)) &&
           (num_ineq == 0 || static_cast<bool>(inequality_jac_tvp));
  }

  bool has_gauss_newton_path() const {
    return has_analytic_derivatives() &&
           static_cast<bool>(objective_hess_diag) &&
           (num_eq == 0 || static_cast<bool>(equality_jac_vec)) &&
           (num_ineq == 0 || static_cast<bool>(inequality_jac_vec));
  }
};

struct SolverSettings {
  double eq_tol = 1e-6;
  double ineq_tol = 1e-6;
  int max_outer = 50;
  int max_inner = 500;
  double penalty_init = 10.0;
  double penalty_growth = 10.0;  // applied when violation fails to shrink 4x
  double step_tol = 1e-7;        // inner termination on projected-gradient norm
  std::ostream* log = nullptr;   // optional per-iteration log lines
};

struct KktReport {
  double stationarity = 0.0;     // projected Lagrangian gradient, inf-norm
  double eq_violation = 0.0;     // inf-norm
  double ineq_violation = 0.0;   // inf-norm of positive part
  double complementarity = 0.0;  // inf-norm of multiplier * constraint
  int iterations = 0;
};

enum class SolveStatus { kConverged, kMaxIter, kInfeasible };
const char* to_string(SolveStatus s);

struct OuterIterate {
  int iteration;
  double objective;
  double eq_violation;
  double ineq_violation;
  double penalty;
  bool penalty_grew;
};

struct Multipliers {
  Eigen::VectorXd eq, ineq;
};

struct NlpSolution {
  Eigen::VectorXd z;
  double objective = 0.0;
  Multipliers multipliers;
  KktReport kkt;
  SolveStatus status = SolveStatus::kMaxIter;
  std::vector<OuterIterate> history;
};

/// Augmented-Lagrangian solve: outer loop over equality and inequality
/// multipliers (inequalities via a squared-hinge term), inner projected
/// limited-memory quasi-Newton descent on the box. z0 is projected onto the
/// box before use. Deterministic.
NlpSolution solve(const NlpProblem& problem, const Eigen::VectorXd& z0,
                  const SolverSettings& settings);

/// Pure diagnostic: the four KKT measures at (z, multipliers).
KktReport kkt_check(const NlpProblem& problem, const Eigen::VectorXd& z,
                    const Multipliers& mult);

}  // namespace windquad
