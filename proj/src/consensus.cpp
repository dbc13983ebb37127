#include "swarmopt/consensus.hpp"

#include <stdexcept>
#include <string>

#include "swarmopt/errors.hpp"

namespace swarmopt {

namespace {

void check_sizes(int weight_agents, int state_agents) {
  if (weight_agents != state_agents) {
    throw DimensionError("weight matrix is for " + std::to_string(weight_agents) +
                         " agents but state has " + std::to_string(state_agents));
  }
}

SwarmState step_raw(const SwarmState& state, const Eigen::MatrixXd& coop_rows,
                    double leader_heading_next, double alpha) {
  const int m = state.agent_count();
  SwarmState next;
  next.t = state.t + 1;
  next.headings.resize(m);
  next.headings.head(m - 1) = coop_rows * state.headings;
  next.headings(m - 1) = leader_heading_next;
  next.pos_x.resize(m);
  next.pos_y.resize(m);
  for (int i = 0; i < m; ++i) {
    const auto p = kinematics_step({state.pos_x(i), state.pos_y(i)},
                                   next.headings(i), alpha);
    next.pos_x(i) = p[0];
    next.pos_y(i) = p[1];
  }
  return next;
}

}  // namespace

SwarmState consensus_step(const SwarmState& state, const WeightMatrix& weights,
                          double leader_heading_next, double alpha) {
  weights.validate();
  check_sizes(weights.agent_count(), state.agent_count());
  return step_raw(state, weights.rows, leader_heading_next, alpha);
}

SwarmTrajectory rollout(const SwarmState& initial, const WeightMatrix& weights,
                        const std::vector<double>& leader_headings,
                        double alpha) {
  weights.validate();
  check_sizes(weights.agent_count(), initial.agent_count());
  return rollout_raw(initial, weights.rows, leader_headings, alpha);
}

SwarmTrajectory rollout_raw(const SwarmState& initial,
                            const Eigen::MatrixXd& coop_rows,
                            const std::vector<double>& leader_headings,
                            double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("step length must be positive");
  }
  if (coop_rows.cols() != initial.agent_count()) {
    throw DimensionError("weight rows are for " + std::to_string(coop_rows.cols()) +
                         " agents but state has " +
                         std::to_string(initial.agent_count()));
  }
  SwarmTrajectory traj;
  traj.step_length = alpha;
  traj.states.reserve(leader_headings.size() + 1);
  traj.states.push_back(initial);
  for (double h : leader_headings) {
    traj.states.push_back(step_raw(traj.states.back(), coop_rows, h, alpha));
  }
  return traj;
}

}  // namespace swarmopt
