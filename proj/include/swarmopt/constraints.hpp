#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swarmopt/scenario.hpp"
#include "swarmopt/swarm_state.hpp"

namespace swarmopt {

// Trajectory implied by a flat design vector: unpack weights and headings,
// then run the consensus dynamics from the scenario's initial formation.
// No weight validation; the optimizer probes infeasible iterates.
SwarmTrajectory rollout_design(const Eigen::VectorXd& y, const ScenarioConfig& scenario);

// Equality residuals, zero when satisfied:
//   rows 0..3: each weight row (all four columns) summed minus 1
//   row 4:     leader final X minus target X
//   row 5:     leader final Y minus target Y
Eigen::VectorXd eval_equalities(const Eigen::VectorXd& y, const ScenarioConfig& scenario);

// Inequality residuals, non-positive when satisfied. For each follower i and
// axis u, the per-step offset to the leader d(t) = u_i(t) - u_leader(t) must
// keep min_tol <= |d(t)| <= max_tol for every t = 1..steps. Both sides are
// squared and aggregated over time with a max, giving 12 rows:
//   rows 0..5:  min_tol^2 - min_t d(t)^2   (X for agents 1..3, then Y)
//   rows 6..11: max_t d(t)^2 - max_tol^2   (same order)
Eigen::VectorXd eval_inequalities(const Eigen::VectorXd& y, const ScenarioConfig& scenario);

inline constexpr int kEqualityCount = 6;
inline constexpr int kInequalityCount = 12;

// Residuals computed from an already-rolled trajectory, so callers that need
// objective and constraints together pay for one rollout only.
Eigen::VectorXd equalities_from_trajectory(const Eigen::VectorXd& y,
                                           const SwarmTrajectory& traj,
                                           const ScenarioConfig& scenario);
Eigen::VectorXd inequalities_from_trajectory(const SwarmTrajectory& traj,
                                             const ScenarioConfig& scenario);

// Per-step spacing residuals, non-positive when satisfied. Same feasible set
// as eval_inequalities, but without the min/max over time: the aggregated
// rows are non-differentiable wherever the binding step changes, which breaks
// finite-difference derivatives exactly where the optimizer converges. Layout
// is 12 * steps rows, floors then ceilings, each block ordered like the
// aggregated form (X agents 1..3, then Y) with steps t = 1..T contiguous:
//   row (axis*3 + agent)*T + (t-1)              = min_tol^2 - d(t)^2
//   row 6T + (axis*3 + agent)*T + (t-1)         = d(t)^2 - max_tol^2
Eigen::VectorXd spacing_rows_from_trajectory(const SwarmTrajectory& traj,
                                             const ScenarioConfig& scenario);

// Central differences with per-column step h * max(1, |y_k|). Throws
// NumericalError naming the variable when a probe goes non-finite.
Eigen::MatrixXd jacobian_fd(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual_fn,
    const Eigen::VectorXd& y, double relative_step = 1e-6);

struct FeasibilityReport {
  bool feasible = false;
  double max_equality_violation = 0.0;
  double max_inequality_violation = 0.0;
  double max_bound_violation = 0.0;
  std::vector<std::string> violations;  // one line per violated row or bound
};

// Independent certificate: re-rolls the trajectory and checks every
// constraint row plus the weight box against the scenario tolerances.
FeasibilityReport check_feasibility(const Eigen::VectorXd& y,
                                    const ScenarioConfig& scenario);

}  // namespace swarmopt
