#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace swarmopt {

struct SolverConfig {
  double kkt_tol = 1e-6;
  double step_tol = 1e-10;
  int max_iters = 200;
  int max_func_evals = 10000;
  double bfgs_damping = 0.2;
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  int multistart_count = 8;
  unsigned long long rng_seed = 42;
  double fd_step = 1e-6;   // relative central-difference step
  double eq_tol = 1e-6;    // equality feasibility certificate
  double ineq_tol = 1e-8;  // inequality feasibility certificate

  void validate() const;  // throws ConfigError
};

// One evaluation of everything the solver needs at a point. Objective and
// constraint residuals usually share one expensive simulation, so problems
// should provide the fused `bundle` when they can.
struct EvalBundle {
  double objective = 0.0;
  Eigen::VectorXd equalities;    // residuals, feasible when all zero
  Eigen::VectorXd inequalities;  // residuals, feasible when all <= 0
};

struct Problem {
  int dimension = 0;
  std::function<double(const Eigen::VectorXd&)> objective;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> equalities;    // optional
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> inequalities;  // optional
  std::function<EvalBundle(const Eigen::VectorXd&)> bundle;             // optional
  Eigen::VectorXd lower;  // empty = unbounded
  Eigen::VectorXd upper;
};

enum class SolveStatus {
  converged,
  max_iters,
  max_evals,
  line_search_failure,
  qp_failure,
};

const char* to_string(SolveStatus status);

struct SolveReport {
  Eigen::VectorXd optimum;
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::max_iters;
  bool feasible = false;
  double max_equality_violation = 0.0;
  double max_inequality_violation = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  int func_evals = 0;
  double wall_seconds = 0.0;
  std::vector<double> objective_history;                  // accepted iterates
  std::vector<std::pair<double, double>> merit_history;   // (before, after) per step
  std::string note;
  int start_index = 0;  // which multistart seed produced this report
};

// Damped BFGS update of a symmetric positive definite matrix. Falls back to
// blending the gradient difference toward B s (Powell damping) whenever raw
// curvature s'y dips below damping * s'Bs, which keeps B positive definite.
Eigen::MatrixXd bfgs_update(const Eigen::MatrixXd& b, const Eigen::VectorXd& s,
                            const Eigen::VectorXd& grad_diff, double damping);

struct LineSearchResult {
  Eigen::VectorXd accepted;
  double step_scale = 0.0;
  double merit_after = 0.0;
  bool success = false;
  int evals = 0;
};

// Backtracking Armijo search on a merit function. merit_at_y and the
// directional derivative at y along step are supplied by the caller; a
// non-finite merit value rejects that trial point.
LineSearchResult line_search(
    const std::function<double(const Eigen::VectorXd&)>& merit_fn,
    const Eigen::VectorXd& y, const Eigen::VectorXd& step, double merit_at_y,
    double directional_derivative, double c1, double backtrack_factor,
    int max_backtracks = 30);

// Sequential quadratic programming with finite-difference derivatives,
// damped BFGS curvature, and an l1 exact-penalty line search. Deterministic:
// no randomness anywhere in the loop.
SolveReport sqp_minimize(const Problem& problem, const Eigen::VectorXd& y0,
                         const SolverConfig& cfg);

}  // namespace swarmopt
