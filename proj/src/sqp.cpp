#include "swarmopt/sqp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "swarmopt/errors.hpp"
#include "swarmopt/qp.hpp"

namespace swarmopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Derivatives {
  Eigen::VectorXd grad_f;
  Eigen::MatrixXd jac_eq;
  Eigen::MatrixXd jac_ineq;
};

std::function<EvalBundle(const Eigen::VectorXd&)> make_bundle_fn(const Problem& p) {
  if (p.bundle) return p.bundle;
  if (!p.objective) {
    throw ConfigError("problem needs an objective or a fused bundle evaluator");
  }
  return [&p](const Eigen::VectorXd& y) {
    EvalBundle b;
    b.objective = p.objective(y);
    if (p.equalities) b.equalities = p.equalities(y);
    if (p.inequalities) b.inequalities = p.inequalities(y);
    return b;
  };
}

double violation_l1(const EvalBundle& b) {
  double v = 0.0;
  for (int i = 0; i < b.equalities.size(); ++i) v += std::abs(b.equalities(i));
  for (int i = 0; i < b.inequalities.size(); ++i) v += std::max(b.inequalities(i), 0.0);
  return v;
}

bool bundle_finite(const EvalBundle& b) {
  return std::isfinite(b.objective) && b.equalities.allFinite() &&
         b.inequalities.allFinite();
}

}  // namespace

void SolverConfig::validate() const {
  if (!(kkt_tol > 0.0)) throw ConfigError("solver.kkt_tol must be positive");
  if (!(step_tol > 0.0)) throw ConfigError("solver.step_tol must be positive");
  if (max_iters < 1) throw ConfigError("solver.max_iters must be at least 1");
  if (max_func_evals < 1) throw ConfigError("solver.max_func_evals must be at least 1");
  if (!(bfgs_damping > 0.0 && bfgs_damping < 1.0)) {
    throw ConfigError("solver.bfgs_damping must lie in (0, 1)");
  }
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) {
    throw ConfigError("solver.armijo_c1 must lie in (0, 1)");
  }
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw ConfigError("solver.backtrack_factor must lie in (0, 1)");
  }
  if (multistart_count < 1) throw ConfigError("solver.multistart_count must be at least 1");
  if (!(fd_step > 0.0)) throw ConfigError("solver.fd_step must be positive");
  if (!(eq_tol > 0.0)) throw ConfigError("solver.eq_tol must be positive");
  if (!(ineq_tol > 0.0)) throw ConfigError("solver.ineq_tol must be positive");
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::max_evals: return "max_evals";
    case SolveStatus::line_search_failure: return "line_search_failure";
    case SolveStatus::qp_failure: return "qp_failure";
  }
  return "unknown";
}

Eigen::MatrixXd bfgs_update(const Eigen::MatrixXd& b, const Eigen::VectorXd& s,
                            const Eigen::VectorXd& grad_diff, double damping) {
  const double s_norm = s.norm();
  if (!(s_norm > 0.0) || !s.allFinite() || !grad_diff.allFinite()) return b;

  const Eigen::VectorXd bs = b * s;
  const double sbs = s.dot(bs);
  if (!(sbs > 0.0)) return b;

  const double sy = s.dot(grad_diff);
  Eigen::VectorXd r = grad_diff;
  if (sy < damping * sbs) {
    const double theta = (1.0 - damping) * sbs / (sbs - sy);
    r = theta * grad_diff + (1.0 - theta) * bs;
  }
  const double sr = s.dot(r);
  if (!(sr > 0.0)) return b;

  Eigen::MatrixXd next = b - (bs * bs.transpose()) / sbs + (r * r.transpose()) / sr;
  return 0.5 * (next + next.transpose());
}

LineSearchResult line_search(
    const std::function<double(const Eigen::VectorXd&)>& merit_fn,
    const Eigen::VectorXd& y, const Eigen::VectorXd& step, double merit_at_y,
    double directional_derivative, double c1, double backtrack_factor,
    int max_backtracks) {
  LineSearchResult result;
  result.accepted = y;
  double t = 1.0;
  for (int k = 0; k < max_backtracks; ++k) {
    const Eigen::VectorXd trial = y + t * step;
    const double m = merit_fn(trial);
    ++result.evals;
    if (std::isfinite(m) && m <= merit_at_y + c1 * t * directional_derivative) {
      result.accepted = trial;
      result.step_scale = t;
      result.merit_after = m;
      result.success = true;
      return result;
    }
    t *= backtrack_factor;
  }
  return result;
}

SolveReport sqp_minimize(const Problem& problem, const Eigen::VectorXd& y0,
                         const SolverConfig& cfg) {
  cfg.validate();
  const int n = problem.dimension;
  if (n < 1) throw ConfigError("problem dimension must be at least 1");
  if (y0.size() != n) {
    throw DimensionError("start point has size " + std::to_string(y0.size()) +
                         ", expected " + std::to_string(n));
  }
  const bool bounded = problem.lower.size() == n && problem.upper.size() == n;
  if ((problem.lower.size() != 0 && problem.lower.size() != n) ||
      problem.upper.size() != problem.lower.size()) {
    throw DimensionError("bounds must be empty or cover every variable");
  }
  if (bounded) {
    for (int j = 0; j < n; ++j) {
      if (y0(j) < problem.lower(j) - 1e-12 || y0(j) > problem.upper(j) + 1e-12) {
        throw std::invalid_argument("start point leaves the variable box at index " +
                                    std::to_string(j + 1));
      }
    }
  }

  const auto t_begin = std::chrono::steady_clock::now();
  const auto bundle_fn = make_bundle_fn(problem);

  int evals = 0;
  auto evaluate = [&](const Eigen::VectorXd& y) {
    ++evals;
    return bundle_fn(y);
  };

  EvalBundle cur = evaluate(y0);
  if (!bundle_finite(cur)) {
    throw NumericalError("objective or constraints are not finite at the start point");
  }
  const int me = static_cast<int>(cur.equalities.size());
  const int mi = static_cast<int>(cur.inequalities.size());

  Eigen::VectorXd y = y0;
  Eigen::MatrixXd b_mat = Eigen::MatrixXd::Identity(n, n);
  double rho = 1.0;
  int rho_slack_streak = 0;

  SolveReport rep;
  rep.status = SolveStatus::max_iters;
  rep.objective_history.push_back(cur.objective);
  rep.kkt_residual = kInf;

  // Differentiate objective and both residual stacks from one sweep of
  // bundle evaluations: 2n evaluations per iteration.
  auto fd_sweep = [&](const Eigen::VectorXd& at) {
    Derivatives d;
    d.grad_f.resize(n);
    d.jac_eq.resize(me, n);
    d.jac_ineq.resize(mi, n);
    Eigen::VectorXd probe = at;
    for (int k = 0; k < n; ++k) {
      const double hk = cfg.fd_step * std::max(1.0, std::abs(at(k)));
      probe(k) = at(k) + hk;
      const EvalBundle plus = evaluate(probe);
      probe(k) = at(k) - hk;
      const EvalBundle minus = evaluate(probe);
      probe(k) = at(k);
      if (!bundle_finite(plus) || !bundle_finite(minus)) {
        throw NumericalError("finite-difference probe hit a non-finite value at variable " +
                             std::to_string(k + 1));
      }
      const double inv = 1.0 / (2.0 * hk);
      d.grad_f(k) = (plus.objective - minus.objective) * inv;
      for (int i = 0; i < me; ++i) {
        d.jac_eq(i, k) = (plus.equalities(i) - minus.equalities(i)) * inv;
      }
      for (int i = 0; i < mi; ++i) {
        d.jac_ineq(i, k) = (plus.inequalities(i) - minus.inequalities(i)) * inv;
      }
    }
    return d;
  };

  // State carried between iterations for the BFGS curvature pair.
  bool have_pending = false;
  bool scale_pending = true;
  Eigen::VectorXd pending_step;
  Derivatives prev;
  Eigen::VectorXd prev_eq_mult, prev_ineq_mult;

  auto finalize = [&](SolveStatus status) {
    rep.status = status;
    rep.optimum = y;
    rep.objective_value = cur.objective;
    rep.func_evals = evals;
    rep.max_equality_violation =
        me > 0 ? cur.equalities.cwiseAbs().maxCoeff() : 0.0;
    rep.max_inequality_violation =
        mi > 0 ? std::max(cur.inequalities.maxCoeff(), 0.0) : 0.0;
    rep.feasible = rep.max_equality_violation <= cfg.eq_tol &&
                   rep.max_inequality_violation <= cfg.ineq_tol;
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
            .count();
    return rep;
  };

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (evals + 2 * n > cfg.max_func_evals) {
      rep.note = "stopped before a derivative sweep would exceed the budget";
      return finalize(SolveStatus::max_evals);
    }
    const Derivatives der = fd_sweep(y);

    if (have_pending) {
      Eigen::VectorXd grad_l_new = der.grad_f;
      Eigen::VectorXd grad_l_old = prev.grad_f;
      if (me > 0) {
        grad_l_new += der.jac_eq.transpose() * prev_eq_mult;
        grad_l_old += prev.jac_eq.transpose() * prev_eq_mult;
      }
      if (mi > 0) {
        grad_l_new += der.jac_ineq.transpose() * prev_ineq_mult;
        grad_l_old += prev.jac_ineq.transpose() * prev_ineq_mult;
      }
      const Eigen::VectorXd grad_diff = grad_l_new - grad_l_old;
      if (scale_pending) {
        // Size the initial curvature model from the first measured pair so
        // early steps match the function's scale instead of the identity's.
        const double sy = pending_step.dot(grad_diff);
        if (sy > 0.0 && grad_diff.allFinite()) {
          const double factor =
              std::clamp(grad_diff.squaredNorm() / sy, 1e-4, 1e8);
          b_mat = factor * Eigen::MatrixXd::Identity(n, n);
          scale_pending = false;
        }
      }
      b_mat = bfgs_update(b_mat, pending_step, grad_diff, cfg.bfgs_damping);
      have_pending = false;
    }

    QpProblem qp;
    qp.hessian = b_mat;
    qp.gradient = der.grad_f;
    qp.eq_mat = der.jac_eq;
    qp.eq_rhs = cur.equalities;
    qp.ineq_mat = der.jac_ineq;
    qp.ineq_rhs = cur.inequalities;
    if (bounded) {
      qp.lower = problem.lower - y;
      qp.upper = problem.upper - y;
    }
    QpResult qpr;
    try {
      qpr = solve_qp(qp);
    } catch (const NumericalError& err) {
      rep.note = std::string("quadratic subproblem failed: ") + err.what();
      return finalize(SolveStatus::qp_failure);
    }

    // KKT residual of the nonlinear problem at y with the fresh multipliers.
    {
      Eigen::VectorXd stat = der.grad_f;
      if (me > 0) stat += der.jac_eq.transpose() * qpr.eq_multipliers;
      if (mi > 0) stat += der.jac_ineq.transpose() * qpr.ineq_multipliers;
      double r = 0.0;
      if (bounded) {
        stat -= qpr.lower_multipliers;
        stat += qpr.upper_multipliers;
        for (int j = 0; j < n; ++j) {
          if (std::isfinite(problem.lower(j))) {
            r = std::max(r, std::abs(qpr.lower_multipliers(j) * (y(j) - problem.lower(j))));
          }
          if (std::isfinite(problem.upper(j))) {
            r = std::max(r, std::abs(qpr.upper_multipliers(j) * (problem.upper(j) - y(j))));
          }
        }
      }
      r = std::max(r, stat.lpNorm<Eigen::Infinity>());
      if (me > 0) r = std::max(r, cur.equalities.cwiseAbs().maxCoeff());
      for (int i = 0; i < mi; ++i) {
        r = std::max(r, cur.inequalities(i));
        r = std::max(r, std::abs(qpr.ineq_multipliers(i) * cur.inequalities(i)));
      }
      rep.kkt_residual = r;
      if (r < cfg.kkt_tol) {
        return finalize(SolveStatus::converged);
      }
    }

    const Eigen::VectorXd step = qpr.step;
    if (step.lpNorm<Eigen::Infinity>() < cfg.step_tol) {
      const double eqv = me > 0 ? cur.equalities.cwiseAbs().maxCoeff() : 0.0;
      const double inv = mi > 0 ? std::max(cur.inequalities.maxCoeff(), 0.0) : 0.0;
      if (eqv <= cfg.eq_tol && inv <= cfg.ineq_tol) {
        rep.note = "step collapsed below step_tol at a feasible point";
        return finalize(SolveStatus::converged);
      }
      rep.note = "step collapsed below step_tol while still infeasible";
      return finalize(SolveStatus::line_search_failure);
    }

    const double viol = violation_l1(cur);
    double mult_inf = 0.0;
    if (me > 0) mult_inf = std::max(mult_inf, qpr.eq_multipliers.cwiseAbs().maxCoeff());
    if (mi > 0) mult_inf = std::max(mult_inf, qpr.ineq_multipliers.cwiseAbs().maxCoeff());
    if (bounded) {
      mult_inf = std::max(mult_inf, qpr.lower_multipliers.cwiseAbs().maxCoeff());
      mult_inf = std::max(mult_inf, qpr.upper_multipliers.cwiseAbs().maxCoeff());
    }
    // Keep the penalty above the current multipliers, but let it come back
    // down after a transient spike: a stale oversized rho makes the merit
    // hypersensitive to violation round-off and starves the line search.
    const double rho_required = 1.5 * mult_inf + 0.1;
    if (rho_required > rho) {
      rho = rho_required;
      rho_slack_streak = 0;
    } else if (rho > 10.0 * rho_required) {
      if (++rho_slack_streak >= 3) {
        rho = std::max(rho_required, 0.1 * rho);
        rho_slack_streak = 0;
      }
    } else {
      rho_slack_streak = 0;
    }

    const double slope_f = der.grad_f.dot(step);
    double slope = slope_f - rho * viol;
    if (slope > -1e-12) {
      if (viol > 1e-14) {
        rho = std::max(rho, (slope_f + 1.0) / viol + mult_inf);
        slope = slope_f - rho * viol;
      }
      if (slope >= 0.0) {
        rep.note = "no descent direction for the penalty merit function";
        return finalize(SolveStatus::line_search_failure);
      }
    }

    const double merit_before = cur.objective + rho * viol;
    EvalBundle trial_bundle;
    bool trial_valid = false;
    auto merit_fn = [&](const Eigen::VectorXd& point) {
      if (evals >= cfg.max_func_evals) return kInf;  // starve further trials
      const EvalBundle b = evaluate(point);
      if (!bundle_finite(b)) return kInf;
      trial_bundle = b;
      trial_valid = true;
      return b.objective + rho * violation_l1(b);
    };

    // Unit step first. If the penalty term rejects it because constraint
    // curvature dominates (the classic full-step stall near a curved active
    // surface), retry once with a least-norm correction that cancels the
    // active residuals at the trial point before falling back to plain
    // backtracking.
    LineSearchResult ls;
    const double armijo_bar = merit_before + cfg.armijo_c1 * slope;
    const Eigen::VectorXd full_trial = y + step;
    const double merit_full = merit_fn(full_trial);
    if (std::isfinite(merit_full) && merit_full <= armijo_bar) {
      ls.accepted = full_trial;
      ls.step_scale = 1.0;
      ls.merit_after = merit_full;
      ls.success = true;
    } else if (trial_valid) {
      const EvalBundle at_trial = trial_bundle;
      std::vector<int> active;
      for (int i = 0; i < mi; ++i) {
        const double linearized = cur.inequalities(i) + der.jac_ineq.row(i).dot(step);
        if (linearized > -1e-7 || at_trial.inequalities(i) > 0.0) active.push_back(i);
      }
      const int rows = me + static_cast<int>(active.size());
      if (rows > 0) {
        Eigen::MatrixXd jac(rows, n);
        Eigen::VectorXd res(rows);
        if (me > 0) {
          jac.topRows(me) = der.jac_eq;
          res.head(me) = -at_trial.equalities;
        }
        for (size_t a = 0; a < active.size(); ++a) {
          jac.row(me + static_cast<int>(a)) = der.jac_ineq.row(active[a]);
          res(me + static_cast<int>(a)) = -at_trial.inequalities(active[a]);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
        Eigen::VectorXd corrected = full_trial + cod.solve(res);
        if (bounded) {
          corrected = corrected.cwiseMax(problem.lower).cwiseMin(problem.upper);
        }
        const double merit_corr = merit_fn(corrected);
        if (std::isfinite(merit_corr) && merit_corr <= armijo_bar) {
          ls.accepted = corrected;
          ls.step_scale = 1.0;
          ls.merit_after = merit_corr;
          ls.success = true;
        }
      }
    }
    if (!ls.success) {
      ls = line_search(merit_fn, y, step, merit_before, slope, cfg.armijo_c1,
                       cfg.backtrack_factor);
    }
    if (!ls.success) {
      if (evals >= cfg.max_func_evals) {
        rep.note = "evaluation budget ran out during the line search";
        return finalize(SolveStatus::max_evals);
      }
      rep.note = "line search exhausted its backtracks";
      return finalize(SolveStatus::line_search_failure);
    }

    pending_step = ls.accepted - y;
    y = ls.accepted;
    if (!trial_valid) {
      cur = evaluate(y);
    } else {
      cur = trial_bundle;
    }
    have_pending = true;
    prev = der;
    prev_eq_mult = qpr.eq_multipliers;
    prev_ineq_mult = qpr.ineq_multipliers;

    rep.merit_history.emplace_back(merit_before, ls.merit_after);
    rep.objective_history.push_back(cur.objective);
    rep.iterations = iter + 1;

    if (evals >= cfg.max_func_evals) {
      rep.note = "evaluation budget exhausted";
      return finalize(SolveStatus::max_evals);
    }
  }
  rep.note = "iteration cap reached";
  return finalize(SolveStatus::max_iters);
}

}  // namespace swarmopt
