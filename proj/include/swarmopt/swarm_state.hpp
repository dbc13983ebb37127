#pragma once

#include <vector>

#include <Eigen/Dense>

namespace swarmopt {

// Snapshot of the swarm at one discrete step. Headings are radians,
// unwrapped (a 370 degree turn is 370 degrees, not 10). Heading 0 points
// along +Y; positive headings rotate toward +X.
struct SwarmState {
  Eigen::VectorXd headings;
  Eigen::VectorXd pos_x;
  Eigen::VectorXd pos_y;
  int t = 0;

  int agent_count() const { return static_cast<int>(headings.size()); }
  int leader() const { return agent_count() - 1; }
};

struct SwarmTrajectory {
  std::vector<SwarmState> states;  // indices 0..T
  double step_length = 1.0;

  int steps() const { return static_cast<int>(states.size()) - 1; }
  int agent_count() const {
    return states.empty() ? 0 : states.front().agent_count();
  }
  const SwarmState& at(int t) const { return states.at(static_cast<size_t>(t)); }
};

}  // namespace swarmopt
