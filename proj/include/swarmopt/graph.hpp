#pragma once

#include <string>
#include <vector>

#include "swarmopt/weight_matrix.hpp"

namespace swarmopt {

// Directed communication graph. neighbors[i] lists the agents whose state
// agent i can read (in-neighbors, no self entries). The last agent is the
// non-cooperative leader: it broadcasts but never listens.
struct AgentGraph {
  int agent_count = 0;
  std::vector<std::vector<int>> neighbors;

  int leader() const { return agent_count - 1; }
  int cooperative_count() const { return agent_count - 1; }
  bool has_edge(int from, int to) const;  // true when `to` listens to `from`

  // Undirected view used for degree counting: i~j when either direction exists.
  bool linked(int i, int j) const;

  void validate() const;  // throws DimensionError on malformed adjacency
};

// The four-rover topology: three followers pairwise bidirectional, leader
// (index 3) feeding all followers and listening to nobody.
AgentGraph make_rover_graph();

// Degree of each agent in the symmetrized graph.
std::vector<int> symmetric_degrees(const AgentGraph& g);

struct MetropolisResult {
  WeightMatrix weights;
  std::vector<std::string> warnings;
};

// Metropolis-Hastings weights: w_ij = 1/(1 + max(d_i, d_j)) on symmetrized
// edges, diagonal takes the slack. Warns (but still computes) when the
// cooperative agents do not form a connected subgraph among themselves.
MetropolisResult metropolis_weights(const AgentGraph& g,
                                    const std::vector<int>& degrees);

}  // namespace swarmopt
