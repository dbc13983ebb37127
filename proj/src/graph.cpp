#include "swarmopt/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "swarmopt/errors.hpp"

namespace swarmopt {

bool AgentGraph::has_edge(int from, int to) const {
  const auto& in = neighbors[static_cast<size_t>(to)];
  return std::find(in.begin(), in.end(), from) != in.end();
}

bool AgentGraph::linked(int i, int j) const {
  return i != j && (has_edge(i, j) || has_edge(j, i));
}

void AgentGraph::validate() const {
  if (agent_count < 2) {
    throw DimensionError("graph needs at least two agents, got " +
                         std::to_string(agent_count));
  }
  if (static_cast<int>(neighbors.size()) != agent_count) {
    throw DimensionError("neighbor list count " + std::to_string(neighbors.size()) +
                         " does not match agent count " + std::to_string(agent_count));
  }
  for (int i = 0; i < agent_count; ++i) {
    for (int j : neighbors[static_cast<size_t>(i)]) {
      if (j < 0 || j >= agent_count) {
        throw DimensionError("agent " + std::to_string(i + 1) +
                             " lists out-of-range neighbor " + std::to_string(j + 1));
      }
      if (j == i) {
        throw DimensionError("agent " + std::to_string(i + 1) + " lists itself");
      }
    }
  }
  if (!neighbors[static_cast<size_t>(leader())].empty()) {
    throw DimensionError("leader must not listen to anyone");
  }
}

AgentGraph make_rover_graph() {
  AgentGraph g;
  g.agent_count = 4;
  g.neighbors = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {}};
  return g;
}

std::vector<int> symmetric_degrees(const AgentGraph& g) {
  std::vector<int> deg(static_cast<size_t>(g.agent_count), 0);
  for (int i = 0; i < g.agent_count; ++i) {
    for (int j = 0; j < g.agent_count; ++j) {
      if (g.linked(i, j)) ++deg[static_cast<size_t>(i)];
    }
  }
  return deg;
}

MetropolisResult metropolis_weights(const AgentGraph& g,
                                    const std::vector<int>& degrees) {
  g.validate();
  if (degrees.size() != static_cast<size_t>(g.agent_count)) {
    throw DimensionError("degree list size " + std::to_string(degrees.size()) +
                         " does not match agent count " +
                         std::to_string(g.agent_count));
  }

  const int m = g.agent_count;
  MetropolisResult result;
  result.weights.rows = Eigen::MatrixXd::Zero(m - 1, m);

  for (int i = 0; i < m - 1; ++i) {
    double off_diag = 0.0;
    for (int j = 0; j < m; ++j) {
      if (!g.linked(i, j)) continue;
      const int dmax = std::max(degrees[static_cast<size_t>(i)],
                                degrees[static_cast<size_t>(j)]);
      const double w = 1.0 / (1.0 + static_cast<double>(dmax));
      result.weights.rows(i, j) = w;
      off_diag += w;
    }
    result.weights.rows(i, i) = 1.0 - off_diag;
  }

  // Connectivity check over the cooperative agents only: consensus among
  // followers needs a path that does not route through the leader.
  const int coop = m - 1;
  std::vector<char> seen(static_cast<size_t>(coop), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j = 0; j < coop; ++j) {
      if (!seen[static_cast<size_t>(j)] && g.linked(i, j)) {
        seen[static_cast<size_t>(j)] = 1;
        frontier.push(j);
      }
    }
  }
  if (std::count(seen.begin(), seen.end(), 1) != coop) {
    result.warnings.push_back(
        "cooperative agents do not form a connected subgraph; consensus "
        "among followers will not mix across components");
  }
  return result;
}

}  // namespace swarmopt
