// SPDX-License-Identifier: Apache-2.0
//
// Augmented-Lagrangian solver for box-constrained NLPs:
//
//   Phi(z) = f(z) + lam_e' c_e + (mu/2)|c_e|^2
//          + (1/(2 mu)) sum_i [ max(0, lam_i + mu g_i)^2 - lam_i^2 ]
//
// The inner minimizer is a projected limited-memory BFGS (memory 10) with
// gradient projection onto the box and an Armijo backtracking line search
// (sufficient decrease 1e-4, halving steps). Multipliers update first-order:
// lam_e += mu c_e, lam_i = max(0, lam_i + mu g_i). The penalty grows only
// when the total violation fails to shrink by 4x. Everything is
// deterministic.
#include "windquad/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <ostream>
#include <cstdio>
#include <cstdlib>

namespace windquad {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIter: return "max_iter";
    case SolveStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

using Eigen::VectorXd;

constexpr double kArmijo = 1e-4;
constexpr double kCurvatureGuard = 1e-10;
constexpr double kStagnationRel = 1e-12;
constexpr double kPenaltyCap = 1e12;
constexpr int kMemory = 10;

VectorXd clamp_box(const VectorXd& z, const VectorXd& lo, const VectorXd& hi) {
  return z.cwiseMax(lo).cwiseMin(hi);
}

double inf_norm_or_zero(const VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

double positive_part_max(const VectorXd& v) {
  return v.size() == 0 ? 0.0 : std::max(0.0, v.maxCoeff());
}

struct Evaluation {
  double objective = 0.0;
  VectorXd eq;
  VectorXd ineq;
};

class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const NlpProblem& p) : p_(p) {
    lambda_eq = VectorXd::Zero(p.num_eq);
    lambda_ineq = VectorXd::Zero(p.num_ineq);
  }

  Evaluation evaluate(const VectorXd& z) const {
    Evaluation e;
    e.objective = p_.objective(z);
    e.eq = p_.num_eq > 0 ? p_.equality(z) : VectorXd();
    e.ineq = p_.num_ineq > 0 ? p_.inequality(z) : VectorXd();
    return e;
  }

  double merit(const Evaluation& e) const {
    double phi = e.objective;
    if (e.eq.size() > 0) {
      phi += lambda_eq.dot(e.eq) + 0.5 * mu * e.eq.squaredNorm();
    }
    for (Eigen::Index i = 0; i < e.ineq.size(); ++i) {
      const double h = std::max(0.0, lambda_ineq[i] + mu * e.ineq[i]);
      phi += (h * h - lambda_ineq[i] * lambda_ineq[i]) / (2.0 * mu);
    }
    return phi;
  }

  // Analytic path: grad f + Je' (lam_e + mu c_e) + Ji' max(0, lam_i + mu g_i).
  VectorXd merit_gradient_analytic(const VectorXd& z, const Evaluation& e) const {
    VectorXd g = p_.objective_gradient(z);
    if (e.eq.size() > 0) {
      g += p_.equality_jac_tvp(z, (lambda_eq + mu * e.eq).eval());
    }
    if (e.ineq.size() > 0) {
      VectorXd hinge = (lambda_ineq + mu * e.ineq).cwiseMax(0.0);
      if (hinge.maxCoeff() > 0.0) g += p_.inequality_jac_tvp(z, hinge);
    }
    return g;
  }

  VectorXd merit_gradient_fd(const VectorXd& z, const VectorXd& lo,
                             const VectorXd& hi) const {
    VectorXd g = VectorXd::Zero(z.size());
    VectorXd zp = z;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      if (lo[i] == hi[i]) continue;  // pinned variable
      const double h = 1e-6 * std::max(1.0, std::abs(z[i]));
      const double zi = z[i];
      zp[i] = zi + h;
      const double fp = merit(evaluate(zp));
      zp[i] = zi - h;
      const double fm = merit(evaluate(zp));
      zp[i] = zi;
      g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
  }

  VectorXd merit_gradient(const VectorXd& z, const Evaluation& e,
                          const VectorXd& lo, const VectorXd& hi) const {
    if (p_.has_analytic_derivatives()) return merit_gradient_analytic(z, e);
    return merit_gradient_fd(z, lo, hi);
  }

  VectorXd lambda_eq, lambda_ineq;
  double mu = 10.0;

 private:
  const NlpProblem& p_;
};

class LbfgsMemory {
 public:
  void clear() { pairs_.clear(); }

  void push(const VectorXd& s, const VectorXd& y) {
    const double sy = s.dot(y);
    if (!(sy > kCurvatureGuard * s.norm() * y.norm())) return;
    pairs_.push_back({s, y, 1.0 / sy});
    if (pairs_.size() > kMemory) pairs_.pop_front();
  }

  // Two-loop recursion, returns an approximation of H * g.
  VectorXd apply(const VectorXd& g) const {
    if (pairs_.empty()) return g;
    VectorXd q = g;
    std::vector<double> alpha(pairs_.size());
    for (size_t i = pairs_.size(); i-- > 0;) {
      alpha[i] = pairs_[i].rho * pairs_[i].s.dot(q);
      q -= alpha[i] * pairs_[i].y;
    }
    const auto& last = pairs_.back();
    const double gamma = last.s.dot(last.y) / last.y.squaredNorm();
    VectorXd r = gamma * q;
    for (size_t i = 0; i < pairs_.size(); ++i) {
      const double beta = pairs_[i].rho * pairs_[i].y.dot(r);
      r += (alpha[i] - beta) * pairs_[i].s;
    }
    return r;
  }

 private:
  struct Pair {
    VectorXd s, y;
    double rho;
  };
  std::deque<Pair> pairs_;
};

struct InnerResult {
  VectorXd z;
  Evaluation eval;
  VectorXd grad;
  int iterations = 0;
  double projected_gradient = 0.0;
};

// Merit Hessian operator restricted to the free variables:
//
//   H v = W''(z) v + mu Je' (Je v) + mu Ji_act' (Ji_act v)
//
// where W(z) = f(z) + y_e' c_e(z) + y_i' c_i(z) with the multiplier estimates
// y_e = lam_e + mu c_e(z0), y_i = max(0, lam_i + mu c_i(z0)) frozen at the
// expansion point. W''(z) v is formed by central differences of the analytic
// gradient of W, which captures the exact objective and constraint curvature;
// the stiff Gauss-Newton part stays analytic. Ji_act keeps the rows with an
// active hinge.
class MeritHessianOperator {
 public:
  MeritHessianOperator(const NlpProblem& p, const VectorXd& z, double mu,
                       const VectorXd& y_eq, const VectorXd& y_ineq,
                       const VectorXd& hinge_active, const VectorXd& free_mask)
      : p_(p), z_(z), mu_(mu), y_eq_(y_eq), y_ineq_(y_ineq),
        hinge_active_(hinge_active), free_(free_mask) {
    fd_step_ = 1e-6 * (1.0 + z.cwiseAbs().maxCoeff());
  }

  VectorXd lagrangian_gradient(const VectorXd& zz) const {
    VectorXd g = p_.objective_gradient(zz);
    if (p_.num_eq > 0 && y_eq_.size() > 0)
      g += p_.equality_jac_tvp(zz, y_eq_);
    if (p_.num_ineq > 0 && y_ineq_.size() > 0 && y_ineq_.maxCoeff() > 0.0)
      g += p_.inequality_jac_tvp(zz, y_ineq_);
    return g;
  }

  VectorXd apply(const VectorXd& v) const {
    VectorXd vm = free_.cwiseProduct(v);
    const double vnorm = vm.cwiseAbs().maxCoeff();
    VectorXd out = VectorXd::Zero(v.size());
    if (vnorm > 0.0) {
      const double h = fd_step_ / vnorm;
      out = (lagrangian_gradient(z_ + h * vm) -
             lagrangian_gradient(z_ - h * vm)) /
            (2.0 * h);
    }
    if (p_.num_eq > 0) {
      out.noalias() += mu_ * p_.equality_jac_tvp(z_, p_.equality_jac_vec(z_, vm));
    }
    if (p_.num_ineq > 0 && hinge_active_.size() > 0 &&
        hinge_active_.maxCoeff() > 0.0) {
      VectorXd jiv = p_.inequality_jac_vec(z_, vm);
      jiv.array() *= hinge_active_.array();
      out.noalias() += mu_ * p_.inequality_jac_tvp(z_, jiv);
    }
    return free_.cwiseProduct(out);
  }

  // Deterministic Rademacher probing of the operator diagonal, used as the
  // conjugate-gradient preconditioner.
  VectorXd estimate_diagonal(int probes) const {
    VectorXd diag = VectorXd::Zero(z_.size());
    std::mt19937 rng(7261991u);
    std::bernoulli_distribution coin(0.5);
    for (int k = 0; k < probes; ++k) {
      VectorXd s(z_.size());
      for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = coin(rng) ? 1.0 : -1.0;
      s = free_.cwiseProduct(s);
      diag += s.cwiseProduct(apply(s));
    }
    diag /= double(probes);
    const double floor = std::max(1e-8, 1e-8 * diag.cwiseAbs().maxCoeff());
    return diag.cwiseMax(floor);
  }

 private:
  const NlpProblem& p_;
  const VectorXd& z_;
  double mu_;
  VectorXd y_eq_, y_ineq_;
  VectorXd hinge_active_;
  VectorXd free_;
  double fd_step_;
};

// Steihaug-style preconditioned CG on H d = -g over the free subspace:
// an inexact Newton direction truncated at the trust radius.
VectorXd solve_newton_cg(const MeritHessianOperator& H, const VectorXd& g_masked,
                         const VectorXd& precond_diag, int max_cg,
                         double radius, bool* hit_boundary) {
  VectorXd d = VectorXd::Zero(g_masked.size());
  VectorXd r = -g_masked;
  const double gnorm = r.norm();
  const double target = std::min(0.1, std::sqrt(gnorm)) * gnorm;
  VectorXd y = r.cwiseQuotient(precond_diag);
  VectorXd pdir = y;
  double rz = r.dot(y);
  *hit_boundary = false;
  auto to_boundary = [&](const VectorXd& from, const VectorXd& along) {
    const double a = along.squaredNorm();
    const double b = 2.0 * from.dot(along);
    const double c = from.squaredNorm() - radius * radius;
    return (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) /
           (2.0 * std::max(a, 1e-300));
  };

  for (int k = 0; k < max_cg; ++k) {
    if (r.norm() <= target) break;
    const VectorXd hp = H.apply(pdir);
    const double php = pdir.dot(hp);
    if (php <= 1e-14 * pdir.squaredNorm()) {
      // Nonpositive curvature: follow this direction to the trust boundary.
      d += to_boundary(d, pdir) * pdir;
      *hit_boundary = true;
      break;
    }
    const double alpha = rz / php;
    const VectorXd d_next = d + alpha * pdir;
    if (d_next.norm() >= radius) {
      d += to_boundary(d, pdir) * pdir;
      *hit_boundary = true;
      break;
    }
    d = d_next;
    r -= alpha * hp;
    y = r.cwiseQuotient(precond_diag);
    const double rz_new = r.dot(y);
    pdir = y + (rz_new / rz) * pdir;
    rz = rz_new;
  }
  return d;
}

InnerResult minimize_inner(const AugmentedLagrangian& L, VectorXd z,
                           const NlpProblem& p, const SolverSettings& s,
                           double pg_tol) {
  const VectorXd& lo = p.lower;
  const VectorXd& hi = p.upper;
  z = clamp_box(z, lo, hi);
  const bool gauss_newton = p.has_gauss_newton_path();

  InnerResult res;
  Evaluation eval = L.evaluate(z);
  double phi = L.merit(eval);
  VectorXd g = L.merit_gradient(z, eval, lo, hi);
  LbfgsMemory mem;
  int stagnant = 0;
  int it = 0;
  double radius = 1.0;  // trust radius for the Gauss-Newton direction

  auto free_mask = [&](const VectorXd& grad) {
    VectorXd mask = VectorXd::Ones(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const bool pinned = lo[i] == hi[i];
      const bool at_low = z[i] - lo[i] <= 1e-12 * std::max(1.0, std::abs(lo[i]));
      const bool at_high = hi[i] - z[i] <= 1e-12 * std::max(1.0, std::abs(hi[i]));
      if (pinned || (at_low && grad[i] > 0.0) || (at_high && grad[i] < 0.0))
        mask[i] = 0.0;
    }
    return mask;
  };

  for (; it < s.max_inner; ++it) {
    res.projected_gradient = inf_norm_or_zero(z - clamp_box(z - g, lo, hi));
    if (res.projected_gradient <= pg_tol) break;

    const VectorXd mask = free_mask(g);
    const VectorXd gm = mask.cwiseProduct(g);
    bool accepted = false;
    VectorXd z_new;
    Evaluation eval_new;
    double phi_new = phi;
    double dbg_alpha = 0.0, dbg_dnorm = 0.0, dbg_dg = 0.0;

    bool newton_boundary = false;
    bool newton_step = false;
    double alpha_accepted = 0.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      VectorXd d;
      newton_step = false;
      if (attempt == 1) {
        d = -gm;
      } else if (gauss_newton) {
        VectorXd y_eq, y_ineq, hinge_active;
        if (p.num_eq > 0) y_eq = L.lambda_eq + L.mu * eval.eq;
        if (p.num_ineq > 0) {
          y_ineq = (L.lambda_ineq + L.mu * eval.ineq).cwiseMax(0.0);
          hinge_active = (y_ineq.array() > 0.0).cast<double>().matrix();
        }
        const MeritHessianOperator H(p, z, L.mu, y_eq, y_ineq, hinge_active,
                                     mask);
        const VectorXd precond = H.estimate_diagonal(8);
        d = solve_newton_cg(H, gm, precond, 400, radius, &newton_boundary);
        newton_step = true;
      } else {
        d = -mem.apply(gm);
      }
      d = mask.cwiseProduct(d);
      if (!d.allFinite() || d.dot(g) >= 0.0) continue;
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls) {
        z_new = clamp_box(z + alpha * d, lo, hi);
        const double pred = g.dot(z_new - z);
        if (pred < 0.0) {
          eval_new = L.evaluate(z_new);
          phi_new = L.merit(eval_new);
          if (phi_new <= phi + kArmijo * pred) {
            accepted = true;
            alpha_accepted = alpha;
            dbg_alpha = alpha;
            dbg_dnorm = d.norm();
            dbg_dg = d.dot(g);
            break;
          }
        }
        alpha *= 0.5;
        if (alpha < 1e-20) break;
      }
    }
    if (!accepted) break;  // cannot decrease along any available direction

    if (newton_step) {
      if (alpha_accepted >= 1.0 && newton_boundary) {
        radius = std::min(1e6, 2.5 * radius);
      } else if (alpha_accepted < 0.25) {
        radius = std::max(1e-8, 0.25 * radius);
      }
    }

    VectorXd g_new = L.merit_gradient(z_new, eval_new, lo, hi);
    if (!gauss_newton) mem.push(z_new - z, g_new - g);
    const double decrease = phi - phi_new;
    z = z_new;
    eval = eval_new;
    phi = phi_new;
    g.swap(g_new);

    if (decrease <= kStagnationRel * std::max(1.0, std::abs(phi))) {
      if (++stagnant >= 5) {
        ++it;
        break;
      }
    } else {
      stagnant = 0;
    }
    if (const char* dbg = std::getenv("WQ_SOLVER_DEBUG"); dbg && it % 1 == 0) {
      std::fprintf(stderr,
                   "  [inner %d] phi=%.12g pg=%.3e decrease=%.3e alpha=%.3e "
                   "dnorm=%.3e dg=%.3e\n",
                   it, phi, res.projected_gradient, decrease, dbg_alpha,
                   dbg_dnorm, dbg_dg);
    }
  }

  res.projected_gradient = inf_norm_or_zero(z - clamp_box(z - g, lo, hi));
  res.z = std::move(z);
  res.eval = std::move(eval);
  res.grad = std::move(g);
  res.iterations = it;
  return res;
}

}  // namespace

NlpSolution solve(const NlpProblem& problem, const Eigen::VectorXd& z0,
                  const SolverSettings& settings) {
  AugmentedLagrangian L(problem);
  L.mu = settings.penalty_init;

  NlpSolution sol;
  VectorXd z = clamp_box(z0, problem.lower, problem.upper);

  double best_excess = std::numeric_limits<double>::infinity();
  double best_objective = std::numeric_limits<double>::infinity();
  // Violation target: multiplier updates may take several outer iterations,
  // the penalty grows only when the current target (tightened 4x after each
  // hit) is missed. The inner stop tolerance starts loose while the
  // multipliers are still poor and tightens with each successful round.
  double viol_target = std::numeric_limits<double>::infinity();
  double inner_tol = std::max(settings.step_tol, 1e-2);
  int total_inner = 0;

  for (int outer = 0; outer < settings.max_outer; ++outer) {
    InnerResult inner = minimize_inner(L, z, problem, settings, inner_tol);
    z = inner.z;
    total_inner += inner.iterations;

    const double veq = inf_norm_or_zero(inner.eval.eq);
    const double vineq = positive_part_max(inner.eval.ineq);
    const double viol = std::max(veq, vineq);
    const bool target_hit = viol <= viol_target;

    // Safeguarded first-order multiplier update, only when the violation
    // target was hit. On an update round the last inner gradient is exactly
    // the Lagrangian gradient at the updated multipliers, so it doubles as
    // the stationarity measure.
    if (target_hit) {
      if (inner.eval.eq.size() > 0) L.lambda_eq += L.mu * inner.eval.eq;
      if (inner.eval.ineq.size() > 0)
        L.lambda_ineq = (L.lambda_ineq + L.mu * inner.eval.ineq).cwiseMax(0.0);
    }
    const double stationarity = inner.projected_gradient;

    sol.history.push_back({outer, inner.eval.objective, veq, vineq, L.mu, false});

    const double excess = std::max(veq - settings.eq_tol, 0.0) +
                          std::max(vineq - settings.ineq_tol, 0.0);
    if (excess < best_excess ||
        (excess == best_excess && inner.eval.objective < best_objective)) {
      best_excess = excess;
      best_objective = inner.eval.objective;
      sol.z = z;
      sol.objective = inner.eval.objective;
      sol.kkt.stationarity = stationarity;
      sol.kkt.eq_violation = veq;
      sol.kkt.ineq_violation = vineq;
    }

    if (settings.log) {
      (*settings.log) << "outer=" << outer << " inner=" << inner.iterations
                      << " obj=" << inner.eval.objective << " eq_viol=" << veq
                      << " ineq_viol=" << vineq << " pg=" << stationarity
                      << " mu=" << L.mu << '\n';
    }

    if (target_hit && veq <= settings.eq_tol && vineq <= settings.ineq_tol &&
        stationarity <= 10.0 * settings.eq_tol) {
      sol.status = SolveStatus::kConverged;
      break;
    }

    if (target_hit) {
      // On track; ask for a 4x shrink and a tighter inner solve next time.
      viol_target = std::max(std::min(settings.eq_tol, settings.ineq_tol),
                             viol / 4.0);
      inner_tol = std::max(settings.step_tol, 0.1 * inner_tol);
    } else {
      if (L.mu >= kPenaltyCap) {
        sol.status = SolveStatus::kInfeasible;
        break;
      }
      L.mu *= settings.penalty_growth;
      sol.history.back().penalty_grew = true;
    }
  }

  sol.multipliers.eq = L.lambda_eq;
  sol.multipliers.ineq = L.lambda_ineq;
  sol.kkt.iterations = total_inner;

  // Complementarity at the returned iterate.
  if (problem.num_ineq > 0) {
    const VectorXd gI = problem.inequality(sol.z);
    sol.kkt.complementarity =
        inf_norm_or_zero(L.lambda_ineq.cwiseProduct(gI));
  }
  return sol;
}

KktReport kkt_check(const NlpProblem& problem, const Eigen::VectorXd& z,
                    const Multipliers& mult) {
  KktReport report;

  VectorXd grad_lagrangian;
  if (problem.has_analytic_derivatives()) {
    grad_lagrangian = problem.objective_gradient(z);
    if (problem.num_eq > 0 && mult.eq.size() > 0)
      grad_lagrangian += problem.equality_jac_tvp(z, mult.eq);
    if (problem.num_ineq > 0 && mult.ineq.size() > 0)
      grad_lagrangian += problem.inequality_jac_tvp(z, mult.ineq);
  } else {
    auto lagrangian = [&](const VectorXd& zz) {
      double v = problem.objective(zz);
      if (problem.num_eq > 0 && mult.eq.size() > 0)
        v += mult.eq.dot(problem.equality(zz));
      if (problem.num_ineq > 0 && mult.ineq.size() > 0)
        v += mult.ineq.dot(problem.inequality(zz));
      return v;
    };
    grad_lagrangian = VectorXd::Zero(z.size());
    VectorXd zp = z;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[i]));
      const double zi = z[i];
      zp[i] = zi + h;
      const double fp = lagrangian(zp);
      zp[i] = zi - h;
      const double fm = lagrangian(zp);
      zp[i] = zi;
      grad_lagrangian[i] = (fp - fm) / (2.0 * h);
    }
  }

  report.stationarity = inf_norm_or_zero(
      z - clamp_box(z - grad_lagrangian, problem.lower, problem.upper));
  if (problem.num_eq > 0)
    report.eq_violation = inf_norm_or_zero(problem.equality(z));
  if (problem.num_ineq > 0) {
    const VectorXd gI = problem.inequality(z);
    report.ineq_violation = positive_part_max(gI);
    if (mult.ineq.size() > 0)
      report.complementarity = inf_norm_or_zero(mult.ineq.cwiseProduct(gI));
  }
  return report;
}

}  // namespace windquad
