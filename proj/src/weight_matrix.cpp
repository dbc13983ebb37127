#include "swarmopt/weight_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "swarmopt/errors.hpp"
#include "swarmopt/graph.hpp"

namespace swarmopt {

namespace {

std::string describe_entry(int row, int col, double value) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "w[%d][%d] = %.12g", row + 1, col + 1, value);
  return buf;
}

}  // namespace

void WeightMatrix::validate(const AgentGraph* graph) const {
  constexpr double kRowSumTol = 1e-9;
  constexpr double kSignTol = 1e-12;
  constexpr double kBoundTol = 1e-9;

  const int m = agent_count();
  if (m < 2 || cooperative_count() != m - 1) {
    throw DimensionError("weight matrix must be (m-1) x m with m >= 2, got " +
                         std::to_string(rows.rows()) + " x " +
                         std::to_string(rows.cols()));
  }
  for (int i = 0; i < cooperative_count(); ++i) {
    const double sum = rows.row(i).sum();
    if (!std::isfinite(sum) || std::abs(sum - 1.0) > kRowSumTol) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "row %d sums to %.12g, expected 1", i + 1, sum);
      throw InvalidWeightsError(buf);
    }
    for (int j = 0; j < m; ++j) {
      const double w = rows(i, j);
      if (w < -kSignTol) {
        throw InvalidWeightsError("negative weight " + describe_entry(i, j, w));
      }
      if (graph != nullptr && i != j) {
        const bool edge = graph->has_edge(j, i);
        if (!edge && std::abs(w) > kSignTol) {
          throw InvalidWeightsError("weight on missing edge " + describe_entry(i, j, w));
        }
        if (edge && lower_bound > 0.0 && w < lower_bound - kBoundTol) {
          throw InvalidWeightsError("edge weight below bound " + describe_entry(i, j, w));
        }
      }
    }
    if (graph != nullptr && lower_bound > 0.0 && rows(i, i) < lower_bound - kBoundTol) {
      throw InvalidWeightsError("self weight below bound " + describe_entry(i, i, rows(i, i)));
    }
  }
}

WeightMatrix WeightMatrix::uniform(int agent_count) {
  WeightMatrix w;
  w.rows = Eigen::MatrixXd::Constant(agent_count - 1, agent_count,
                                     1.0 / static_cast<double>(agent_count));
  return w;
}

}  // namespace swarmopt
