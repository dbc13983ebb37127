#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "swarmopt/swarm_state.hpp"
#include "swarmopt/weight_matrix.hpp"

namespace swarmopt {

// One kinematic move: the rover advances alpha along its heading, where
// heading 0 points straight up the Y axis. Total function, no checks.
inline std::array<double, 2> kinematics_step(std::array<double, 2> position,
                                             double heading, double alpha) {
  return {position[0] + alpha * std::sin(heading),
          position[1] + alpha * std::cos(heading)};
}

// One synchronous update: cooperative headings become the weighted average
// of all current headings, the leader takes its commanded next heading, and
// every rover then moves alpha along its new heading. Validates weights.
SwarmState consensus_step(const SwarmState& state, const WeightMatrix& weights,
                          double leader_heading_next, double alpha = 1.0);

// Full trajectory from an initial state under a fixed weight matrix and a
// leader heading schedule (entries for t = 1..T). Validates weights once.
SwarmTrajectory rollout(const SwarmState& initial, const WeightMatrix& weights,
                        const std::vector<double>& leader_headings,
                        double alpha = 1.0);

// Same dynamics with no weight validation. The optimizer evaluates
// intermediate iterates whose rows do not yet sum to one; the update rule
// itself is total, so those rollouts must not throw.
SwarmTrajectory rollout_raw(const SwarmState& initial,
                            const Eigen::MatrixXd& coop_rows,
                            const std::vector<double>& leader_headings,
                            double alpha = 1.0);

}  // namespace swarmopt
