#pragma once

#include <Eigen/Dense>

namespace swarmopt {

struct AgentGraph;

// Row-stochastic consensus weights for the cooperative agents. rows is
// (m-1) x m: row i holds the weights agent i applies to all m agents'
// headings, including its own. The leader has no row here; its heading is
// an exogenous input.
struct WeightMatrix {
  Eigen::MatrixXd rows;
  double lower_bound = 0.0;  // floor for entries on live edges (0 = none)

  int agent_count() const { return static_cast<int>(rows.cols()); }
  int cooperative_count() const { return static_cast<int>(rows.rows()); }

  // Throws InvalidWeightsError when a row does not sum to 1 (tol 1e-9),
  // an entry is negative, or (when a graph is supplied) a non-edge entry
  // is nonzero / an edge entry sits below lower_bound.
  void validate(const AgentGraph* graph = nullptr) const;

  static WeightMatrix uniform(int agent_count);  // every entry 1/m
};

}  // namespace swarmopt
