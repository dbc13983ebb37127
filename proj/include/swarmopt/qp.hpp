#pragma once

#include <Eigen/Dense>

namespace swarmopt {

// Convex quadratic program in step variables d:
//   minimize    0.5 d'Hd + g'd
//   subject to  A_eq d + b_eq  = 0
//               A_in d + b_in <= 0
//               lower <= d <= upper   (+/-inf entries allowed)
// H must be symmetric positive definite. Constraint matrices may have zero
// rows; lower/upper may be empty (treated as unbounded).
struct QpProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd eq_mat;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_mat;
  Eigen::VectorXd ineq_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dimension() const { return static_cast<int>(gradient.size()); }
  void validate() const;  // throws DimensionError on shape mismatches
};

struct QpResult {
  Eigen::VectorXd step;
  Eigen::VectorXd eq_multipliers;     // free sign
  Eigen::VectorXd ineq_multipliers;   // >= 0, zero when inactive
  Eigen::VectorXd lower_multipliers;  // >= 0, zero when inactive
  Eigen::VectorXd upper_multipliers;  // >= 0, zero when inactive
  bool feasible = true;   // false: constraints were relaxed elastically
  int iterations = 0;
  double kkt_residual = 0.0;
};

// Primal working-set method over dense KKT systems. When the constraints
// admit no solution (inconsistent linearization), retries an elastic
// reformulation that minimizes constraint violation alongside the model and
// reports feasible = false. Throws NumericalError when the KKT systems stay
// singular after diagonal regularization retries.
QpResult solve_qp(const QpProblem& qp);

}  // namespace swarmopt
