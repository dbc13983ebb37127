#include "swarmopt/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "swarmopt/errors.hpp"

namespace swarmopt {

namespace {

constexpr double kFeasTol = 1e-10;
constexpr double kMultTol = 1e-11;
// Phase-1 declares the constraints satisfiable when the optimal shared slack
// drops below this.
constexpr double kPhase1Tol = 1e-9;

enum class RowKind { general, lower_bound, upper_bound };

struct RowTag {
  RowKind kind;
  int index;  // inequality row or variable index
};

struct EqpSolution {
  Eigen::VectorXd d;
  Eigen::VectorXd multipliers;
};

// Equality-constrained QP via the dense KKT system. The first attempt solves
// the exact system; retries escalate a primal shift on the Hessian block and
// a dual shift on the constraint block. The dual shift makes the matrix
// quasi-definite, so a numerically rank-deficient working set still yields a
// usable step instead of a singular solve.
EqpSolution solve_eqp(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& gradient,
                      const Eigen::MatrixXd& active_mat, const Eigen::VectorXd& active_rhs) {
  const int n = static_cast<int>(gradient.size());
  const int na = static_cast<int>(active_mat.rows());
  const double scale = 1.0 + hessian.trace() / std::max(1, n);

  double tau = 0.0;
  double dual = 0.0;
  for (int attempt = 0; attempt < 5; ++attempt) {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + na, n + na);
    kkt.topLeftCorner(n, n) = hessian;
    if (tau > 0.0) kkt.topLeftCorner(n, n).diagonal().array() += tau;
    if (na > 0) {
      kkt.topRightCorner(n, na) = active_mat.transpose();
      kkt.bottomLeftCorner(na, n) = active_mat;
      if (dual > 0.0) {
        kkt.bottomRightCorner(na, na).diagonal().array() -= dual;
      }
    }
    Eigen::VectorXd rhs(n + na);
    rhs.head(n) = -gradient;
    if (na > 0) rhs.tail(na) = -active_rhs;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt);
    Eigen::VectorXd sol = lu.solve(rhs);
    const double residual = (kkt * sol - rhs).lpNorm<Eigen::Infinity>();
    if (sol.allFinite() && residual <= 1e-8 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) {
      EqpSolution out;
      out.d = sol.head(n);
      out.multipliers = sol.tail(na);
      return out;
    }
    if (tau == 0.0) {
      tau = 1e-10 * scale;
      dual = 1e-11;
    } else {
      tau *= 1e3;
      dual *= 1e3;
    }
  }
  throw NumericalError("KKT system stayed singular after regularization retries");
}

struct CoreProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd eq_mat;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_rows;  // general rows then bound rows
  Eigen::VectorXd ineq_offsets;
  std::vector<RowTag> tags;
};

CoreProblem assemble(const QpProblem& qp) {
  CoreProblem core;
  const int n = qp.dimension();
  core.hessian = 0.5 * (qp.hessian + qp.hessian.transpose());
  core.gradient = qp.gradient;
  core.eq_mat = qp.eq_mat;
  core.eq_rhs = qp.eq_rhs;

  const int mi = static_cast<int>(qp.ineq_mat.rows());
  int bound_rows = 0;
  const bool has_bounds = qp.lower.size() == n;
  if (has_bounds) {
    for (int j = 0; j < n; ++j) {
      if (std::isfinite(qp.lower(j))) ++bound_rows;
      if (std::isfinite(qp.upper(j))) ++bound_rows;
    }
  }
  core.ineq_rows = Eigen::MatrixXd::Zero(mi + bound_rows, n);
  core.ineq_offsets.resize(mi + bound_rows);
  core.tags.reserve(static_cast<size_t>(mi + bound_rows));
  for (int i = 0; i < mi; ++i) {
    core.ineq_rows.row(i) = qp.ineq_mat.row(i);
    core.ineq_offsets(i) = qp.ineq_rhs(i);
    core.tags.push_back({RowKind::general, i});
  }
  if (has_bounds) {
    int r = mi;
    for (int j = 0; j < n; ++j) {
      if (std::isfinite(qp.lower(j))) {
        core.ineq_rows(r, j) = -1.0;
        core.ineq_offsets(r) = qp.lower(j);
        core.tags.push_back({RowKind::lower_bound, j});
        ++r;
      }
      if (std::isfinite(qp.upper(j))) {
        core.ineq_rows(r, j) = 1.0;
        core.ineq_offsets(r) = -qp.upper(j);
        core.tags.push_back({RowKind::upper_bound, j});
        ++r;
      }
    }
  }
  return core;
}

struct Candidate {
  Eigen::VectorXd d;
  Eigen::VectorXd eq_mult;
  Eigen::VectorXd ineq_mult;  // over all core inequality rows
};

double kkt_residual_of(const CoreProblem& core, const Eigen::VectorXd& d,
                       const Eigen::VectorXd& eq_mult, const Eigen::VectorXd& ineq_mult) {
  Eigen::VectorXd stat = core.hessian * d + core.gradient;
  if (core.eq_mat.rows() > 0) stat += core.eq_mat.transpose() * eq_mult;
  if (core.ineq_rows.rows() > 0) stat += core.ineq_rows.transpose() * ineq_mult;
  double r = stat.lpNorm<Eigen::Infinity>();
  if (core.eq_mat.rows() > 0) {
    r = std::max(r, (core.eq_mat * d + core.eq_rhs).lpNorm<Eigen::Infinity>());
  }
  for (int i = 0; i < core.ineq_rows.rows(); ++i) {
    const double v = core.ineq_rows.row(i).dot(d) + core.ineq_offsets(i);
    r = std::max(r, v);                           // primal feasibility
    r = std::max(r, -ineq_mult(i));               // dual feasibility
    r = std::max(r, std::abs(ineq_mult(i) * v));  // complementarity
  }
  return r;
}

struct PrimalOutcome {
  Eigen::VectorXd x;
  Eigen::VectorXd eq_mult;
  Eigen::VectorXd ineq_mult;  // over all core inequality rows
  bool optimal = false;
  int iterations = 0;
};

// Primal active-set iteration from a feasible start. Each pass solves the
// equality-constrained subproblem over the working set, then either moves
// with a ratio test that stops at the first blocking row, or retires the
// working row with the most negative multiplier. A blocking row has a.p > 0
// while every working row keeps a.p = 0, so additions preserve full row rank
// of the active matrix by construction.
// `promised_gate`, when positive, overrides the relative no-meaningful-
// decrease threshold with an absolute one. Phase 1 needs it: its verdict
// compares the optimal slack against an absolute tolerance, so the solve
// must resolve objective decreases far below the generic relative cutoff.
PrimalOutcome primal_solve(const CoreProblem& core, const Eigen::VectorXd& x0,
                           double promised_gate = -1.0) {
  const int n = static_cast<int>(core.gradient.size());
  const int me = static_cast<int>(core.eq_mat.rows());
  const int k = static_cast<int>(core.ineq_rows.rows());
  const int iter_cap = 12 * (n + k + me) + 60;

  Eigen::VectorXd x = x0;
  std::vector<int> working;
  std::vector<char> in_working(static_cast<size_t>(k), 0);
  int stall = 0;
  bool bland = false;
  bool at_subspace_min = false;

  PrimalOutcome out;
  out.eq_mult = Eigen::VectorXd::Zero(me);
  out.ineq_mult = Eigen::VectorXd::Zero(k);

  for (int iter = 0; iter < iter_cap; ++iter) {
    out.iterations = iter + 1;
    const int na = me + static_cast<int>(working.size());
    Eigen::MatrixXd active_mat(na, n);
    if (me > 0) active_mat.topRows(me) = core.eq_mat;
    for (size_t w = 0; w < working.size(); ++w) {
      active_mat.row(me + static_cast<int>(w)) = core.ineq_rows.row(working[w]);
    }
    const Eigen::VectorXd grad_at_x = core.gradient + core.hessian * x;
    const EqpSolution eqp =
        solve_eqp(core.hessian, grad_at_x, active_mat, Eigen::VectorXd::Zero(na));
    const Eigen::VectorXd& p = eqp.d;

    // The step norm alone cannot decide stationarity: the KKT solve has a
    // noise floor proportional to the data scale, and a noise step repeats
    // forever. Two further certificates close that gap. Structural: a full
    // free step lands exactly on the subspace minimizer, so if the working
    // set has not changed since, the new p is pure noise. Residual: the
    // model promises no meaningful decrease and least-squares multipliers
    // (free of the H p term the subproblem multipliers carry) certify the
    // gradient. Either way the multipliers reported come from the
    // least-squares solve, which does not inherit the step noise.
    Eigen::VectorXd mult = eqp.multipliers;
    bool stationary =
        p.lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + x.lpNorm<Eigen::Infinity>());
    if (!stationary) {
      const double promised = -(grad_at_x.dot(p) + 0.5 * p.dot(core.hessian * p));
      const double obj_scale =
          1.0 + std::abs(0.5 * x.dot(core.hessian * x) + core.gradient.dot(x));
      const double gate =
          promised_gate > 0.0 ? promised_gate : 1e-9 * obj_scale;
      if (promised <= gate) {
        if (na == 0) {
          stationary = at_subspace_min ||
                       grad_at_x.lpNorm<Eigen::Infinity>() <=
                           1e-9 * (1.0 + grad_at_x.lpNorm<Eigen::Infinity>());
        } else {
          Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(
              active_mat.transpose());
          const Eigen::VectorXd ls = cod.solve(-grad_at_x);
          const double resid = (grad_at_x + active_mat.transpose() * ls)
                                   .lpNorm<Eigen::Infinity>();
          if (at_subspace_min ||
              resid <= 1e-9 * (1.0 + grad_at_x.lpNorm<Eigen::Infinity>())) {
            stationary = true;
            mult = ls;
          }
        }
      }
    }
    if (stationary) {
      // Stationary over the working set; multipliers decide the next move.
      int drop = -1;
      double most_negative = -kMultTol;
      for (size_t w = 0; w < working.size(); ++w) {
        const double mu = mult(me + static_cast<int>(w));
        if (bland) {
          if (mu < -kMultTol) {
            drop = static_cast<int>(w);
            break;
          }
        } else if (mu < most_negative) {
          most_negative = mu;
          drop = static_cast<int>(w);
        }
      }
      if (drop < 0) {
        out.optimal = true;
        out.x = x;
        if (me > 0) out.eq_mult = mult.head(me);
        for (size_t w = 0; w < working.size(); ++w) {
          out.ineq_mult(working[w]) =
              std::max(mult(me + static_cast<int>(w)), 0.0);
        }
        return out;
      }
      in_working[static_cast<size_t>(working[static_cast<size_t>(drop)])] = 0;
      working.erase(working.begin() + drop);
      at_subspace_min = false;
      if (++stall > n + k) bland = true;
      continue;
    }

    // Ratio test: longest step along p that keeps every row feasible.
    double alpha = 1.0;
    int block = -1;
    for (int i = 0; i < k; ++i) {
      if (in_working[static_cast<size_t>(i)]) continue;
      const double slope = core.ineq_rows.row(i).dot(p);
      const double slope_tol =
          1e-13 * (1.0 + core.ineq_rows.row(i).cwiseAbs().sum() *
                             p.lpNorm<Eigen::Infinity>());
      if (slope <= slope_tol) continue;
      const double value = core.ineq_rows.row(i).dot(x) + core.ineq_offsets(i);
      const double t = std::max(0.0, -value / slope);
      if (t < alpha - 1e-15) {
        alpha = t;
        block = i;
      } else if (block >= 0 && t <= alpha + 1e-15 && i < block) {
        block = i;  // deterministic lowest-index preference on ties
      }
    }

    if (alpha > 0.0) {
      x += alpha * p;
      stall = 0;
    } else if (++stall > n + k) {
      bland = true;
    }
    if (block >= 0 && alpha < 1.0 - 1e-15) {
      working.push_back(block);
      in_working[static_cast<size_t>(block)] = 1;
      at_subspace_min = false;
    } else {
      at_subspace_min = true;  // took the whole step over this working set
    }
  }

  // Iteration cap: return the current feasible point without optimality.
  out.x = x;
  return out;
}

// Smallest shared slack that satisfies every inequality row of `core` at
// once, holding the equalities exact: phase 1 of the primal method. Solved
// by the same active-set iteration on (x, gamma), started from the anchor
// with gamma above the worst violation. Returns a feasible point, or nothing
// when even the relaxed problem keeps gamma above tolerance.
std::optional<Eigen::VectorXd> feasible_point(const CoreProblem& core,
                                              const Eigen::VectorXd& anchor,
                                              int* iterations) {
  const int n = static_cast<int>(core.gradient.size());
  const int k = static_cast<int>(core.ineq_rows.rows());

  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    worst = std::max(worst, core.ineq_rows.row(i).dot(anchor) + core.ineq_offsets(i));
  }
  if (worst <= kFeasTol) return anchor;

  // The objective is the slack alone. Any weight on x would shift the
  // optimum away from gamma = 0 and misreport feasible instances, so the
  // Hessian stays singular in the x block and the regularized KKT solver
  // absorbs that.
  CoreProblem relaxed;
  relaxed.hessian = Eigen::MatrixXd::Zero(n + 1, n + 1);
  relaxed.hessian(n, n) = 1.0;
  relaxed.gradient = Eigen::VectorXd::Zero(n + 1);
  relaxed.eq_mat = Eigen::MatrixXd::Zero(core.eq_mat.rows(), n + 1);
  if (core.eq_mat.rows() > 0) relaxed.eq_mat.leftCols(n) = core.eq_mat;
  relaxed.eq_rhs = core.eq_rhs;
  relaxed.ineq_rows = Eigen::MatrixXd::Zero(k + 1, n + 1);
  relaxed.ineq_rows.topLeftCorner(k, n) = core.ineq_rows;
  relaxed.ineq_rows.col(n).head(k).setConstant(-1.0);
  relaxed.ineq_rows(k, n) = -1.0;  // gamma >= 0
  relaxed.ineq_offsets.resize(k + 1);
  relaxed.ineq_offsets.head(k) = core.ineq_offsets;
  relaxed.ineq_offsets(k) = 0.0;

  Eigen::VectorXd start(n + 1);
  start.head(n) = anchor;
  start(n) = worst + 1.0;

  const PrimalOutcome sol =
      primal_solve(relaxed, start, 0.25 * kPhase1Tol * kPhase1Tol);
  *iterations += sol.iterations;
  if (sol.x(n) > kPhase1Tol) return std::nullopt;
  return Eigen::VectorXd(sol.x.head(n));
}

QpResult finish(const QpProblem& qp, const CoreProblem& core, const Candidate& cand,
                int iterations, bool feasible) {
  const int n = qp.dimension();
  QpResult result;
  result.step = cand.d;
  result.eq_multipliers = cand.eq_mult;
  result.ineq_multipliers = Eigen::VectorXd::Zero(qp.ineq_mat.rows());
  result.lower_multipliers = Eigen::VectorXd::Zero(n);
  result.upper_multipliers = Eigen::VectorXd::Zero(n);
  for (size_t r = 0; r < core.tags.size(); ++r) {
    const double mu = std::max(cand.ineq_mult(static_cast<int>(r)), 0.0);
    switch (core.tags[r].kind) {
      case RowKind::general:
        result.ineq_multipliers(core.tags[r].index) = mu;
        break;
      case RowKind::lower_bound:
        result.lower_multipliers(core.tags[r].index) = mu;
        break;
      case RowKind::upper_bound:
        result.upper_multipliers(core.tags[r].index) = mu;
        break;
    }
  }
  result.feasible = feasible;
  result.iterations = iterations;
  result.kkt_residual = kkt_residual_of(core, cand.d, cand.eq_mult, cand.ineq_mult);
  return result;
}

}  // namespace

void QpProblem::validate() const {
  const int n = dimension();
  if (n == 0) throw DimensionError("QP has no variables");
  if (hessian.rows() != n || hessian.cols() != n) {
    throw DimensionError("hessian must be n x n");
  }
  if (eq_mat.rows() != eq_rhs.size() || (eq_mat.rows() > 0 && eq_mat.cols() != n)) {
    throw DimensionError("equality rows and offsets disagree");
  }
  if (ineq_mat.rows() != ineq_rhs.size() || (ineq_mat.rows() > 0 && ineq_mat.cols() != n)) {
    throw DimensionError("inequality rows and offsets disagree");
  }
  if (lower.size() != upper.size() || (lower.size() != 0 && lower.size() != n)) {
    throw DimensionError("bounds must be empty or cover every variable");
  }
  for (int j = 0; j < lower.size(); ++j) {
    if (lower(j) > upper(j)) {
      throw DimensionError("lower bound exceeds upper bound at variable " +
                           std::to_string(j + 1));
    }
  }
}

QpResult solve_qp(const QpProblem& qp) {
  qp.validate();
  const CoreProblem core = assemble(qp);
  const int n = qp.dimension();
  const int me = static_cast<int>(core.eq_mat.rows());

  // Minimum-norm equality solution anchors both phases.
  Eigen::VectorXd anchor = Eigen::VectorXd::Zero(n);
  if (me > 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(core.eq_mat);
    anchor = cod.solve(-core.eq_rhs);
    const double residual = (core.eq_mat * anchor + core.eq_rhs).lpNorm<Eigen::Infinity>();
    if (!anchor.allFinite() ||
        residual > 1e-8 * (1.0 + core.eq_rhs.lpNorm<Eigen::Infinity>())) {
      throw NumericalError("equality rows are mutually inconsistent");
    }
  }

  int total_iterations = 0;
  if (const auto start = feasible_point(core, anchor, &total_iterations)) {
    const PrimalOutcome sol = primal_solve(core, *start);
    total_iterations += sol.iterations;
    Candidate cand;
    cand.d = sol.x;
    cand.eq_mult = sol.eq_mult;
    cand.ineq_mult = sol.ineq_mult;
    return finish(qp, core, cand, total_iterations, true);
  }

  // Elastic relaxation: let each general inequality be violated by a slack
  // s_i >= 0 at a price of rho per unit. Bounds and equalities stay hard, so
  // a point satisfying just those seeds the relaxed solve.
  const int mi = static_cast<int>(qp.ineq_mat.rows());
  if (mi == 0) {
    throw NumericalError("equalities and bounds are jointly infeasible");
  }

  CoreProblem hard_only = core;
  const int bound_rows = static_cast<int>(core.ineq_rows.rows()) - mi;
  hard_only.ineq_rows = core.ineq_rows.bottomRows(bound_rows);
  hard_only.ineq_offsets = core.ineq_offsets.tail(bound_rows);
  hard_only.tags.assign(core.tags.begin() + mi, core.tags.end());
  const auto box_point = feasible_point(hard_only, anchor, &total_iterations);
  if (!box_point) {
    throw NumericalError("equalities and bounds are jointly infeasible");
  }

  const double rho = 1e4 * (1.0 + qp.gradient.lpNorm<Eigen::Infinity>());
  const double delta = 1e-6 * (1.0 + core.hessian.trace() / n);
  const double inf = std::numeric_limits<double>::infinity();

  QpProblem elastic;
  elastic.hessian = Eigen::MatrixXd::Zero(n + mi, n + mi);
  elastic.hessian.topLeftCorner(n, n) = core.hessian;
  elastic.hessian.bottomRightCorner(mi, mi) =
      delta * Eigen::MatrixXd::Identity(mi, mi);
  elastic.gradient.resize(n + mi);
  elastic.gradient.head(n) = qp.gradient;
  elastic.gradient.tail(mi).setConstant(rho);
  elastic.eq_mat = Eigen::MatrixXd::Zero(qp.eq_mat.rows(), n + mi);
  if (qp.eq_mat.rows() > 0) elastic.eq_mat.leftCols(n) = qp.eq_mat;
  elastic.eq_rhs = qp.eq_rhs;
  elastic.ineq_mat = Eigen::MatrixXd::Zero(mi, n + mi);
  elastic.ineq_mat.leftCols(n) = qp.ineq_mat;
  elastic.ineq_mat.rightCols(mi) = -Eigen::MatrixXd::Identity(mi, mi);
  elastic.ineq_rhs = qp.ineq_rhs;
  elastic.lower.resize(n + mi);
  elastic.upper.resize(n + mi);
  if (qp.lower.size() == n) {
    elastic.lower.head(n) = qp.lower;
    elastic.upper.head(n) = qp.upper;
  } else {
    elastic.lower.head(n).setConstant(-inf);
    elastic.upper.head(n).setConstant(inf);
  }
  elastic.lower.tail(mi).setZero();
  elastic.upper.tail(mi).setConstant(inf);

  const CoreProblem elastic_core = assemble(elastic);
  Eigen::VectorXd elastic_start(n + mi);
  elastic_start.head(n) = *box_point;
  for (int i = 0; i < mi; ++i) {
    const double v = qp.ineq_mat.row(i).dot(*box_point) + qp.ineq_rhs(i);
    elastic_start(n + i) = std::max(v, 0.0) + 1.0;
  }
  const PrimalOutcome relaxed = primal_solve(elastic_core, elastic_start);
  total_iterations += relaxed.iterations;

  Candidate mapped;
  mapped.d = relaxed.x.head(n);
  mapped.eq_mult = relaxed.eq_mult;
  mapped.ineq_mult = Eigen::VectorXd::Zero(core.ineq_rows.rows());
  // General rows come first in both assemblies; bound rows on the original
  // variables keep their kind and variable index in the elastic problem.
  for (size_t r = 0; r < elastic_core.tags.size(); ++r) {
    const RowTag& tag = elastic_core.tags[r];
    const double mu = relaxed.ineq_mult(static_cast<int>(r));
    if (tag.kind == RowKind::general && tag.index < mi) {
      mapped.ineq_mult(tag.index) = std::min(mu, rho);
    } else if (tag.kind != RowKind::general && tag.index < n) {
      for (size_t s = 0; s < core.tags.size(); ++s) {
        if (core.tags[s].kind == tag.kind && core.tags[s].index == tag.index) {
          mapped.ineq_mult(static_cast<int>(s)) = mu;
          break;
        }
      }
    }
  }
  return finish(qp, core, mapped, total_iterations, false);
}

}  // namespace swarmopt
