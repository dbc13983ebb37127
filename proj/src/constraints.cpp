#include "swarmopt/constraints.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "swarmopt/consensus.hpp"
#include "swarmopt/design_vector.hpp"
#include "swarmopt/errors.hpp"

namespace swarmopt {

namespace {

Eigen::MatrixXd coop_rows_of(const Eigen::VectorXd& y, const DesignLayout& layout) {
  Eigen::MatrixXd rows(DesignLayout::kAgents - 1, DesignLayout::kAgents);
  for (int i = 0; i < DesignLayout::kAgents - 1; ++i) {
    for (int j = 0; j < DesignLayout::kAgents; ++j) {
      rows(i, j) = y(layout.weight_index(i, j));
    }
  }
  return rows;
}

std::vector<double> headings_of(const Eigen::VectorXd& y, const DesignLayout& layout) {
  std::vector<double> headings(static_cast<size_t>(layout.steps));
  for (int t = 1; t <= layout.steps; ++t) {
    headings[static_cast<size_t>(t - 1)] = y(layout.heading_index(t));
  }
  return headings;
}

void check_design_size(const Eigen::VectorXd& y, const DesignLayout& layout) {
  if (y.size() != layout.size()) {
    throw DimensionError("design vector has size " + std::to_string(y.size()) +
                         ", expected " + std::to_string(layout.size()));
  }
}

// Smallest and largest squared leader offset over t = 1..T for one
// follower/axis pair.
struct OffsetRange {
  double min_sq = std::numeric_limits<double>::infinity();
  double max_sq = 0.0;
};

OffsetRange offset_range(const SwarmTrajectory& traj, int agent, int axis) {
  OffsetRange range;
  const int leader = traj.agent_count() - 1;
  for (int t = 1; t <= traj.steps(); ++t) {
    const SwarmState& s = traj.at(t);
    const double d = axis == 0 ? s.pos_x(agent) - s.pos_x(leader)
                               : s.pos_y(agent) - s.pos_y(leader);
    const double sq = d * d;
    range.min_sq = std::min(range.min_sq, sq);
    range.max_sq = std::max(range.max_sq, sq);
  }
  return range;
}

}  // namespace

SwarmTrajectory rollout_design(const Eigen::VectorXd& y, const ScenarioConfig& scenario) {
  const DesignLayout layout{scenario.steps};
  check_design_size(y, layout);
  return rollout_raw(scenario.initial_state(), coop_rows_of(y, layout),
                     headings_of(y, layout), scenario.step_length);
}

Eigen::VectorXd equalities_from_trajectory(const Eigen::VectorXd& y,
                                           const SwarmTrajectory& traj,
                                           const ScenarioConfig& scenario) {
  const DesignLayout layout{scenario.steps};
  check_design_size(y, layout);

  Eigen::VectorXd residuals(kEqualityCount);
  for (int i = 0; i < DesignLayout::kAgents; ++i) {
    double sum = 0.0;
    for (int j = 0; j < DesignLayout::kAgents; ++j) {
      sum += y(layout.weight_index(i, j));
    }
    residuals(i) = sum - 1.0;
  }

  const SwarmState& last = traj.at(traj.steps());
  const int leader = last.agent_count() - 1;
  residuals(4) = last.pos_x(leader) - scenario.target[0];
  residuals(5) = last.pos_y(leader) - scenario.target[1];
  return residuals;
}

Eigen::VectorXd inequalities_from_trajectory(const SwarmTrajectory& traj,
                                             const ScenarioConfig& scenario) {
  const double min_sq = scenario.min_tol * scenario.min_tol;
  const double max_sq = scenario.max_tol * scenario.max_tol;
  Eigen::VectorXd residuals(kInequalityCount);
  int row = 0;
  for (int axis = 0; axis < 2; ++axis) {
    for (int agent = 0; agent < 3; ++agent) {
      residuals(row++) = min_sq - offset_range(traj, agent, axis).min_sq;
    }
  }
  for (int axis = 0; axis < 2; ++axis) {
    for (int agent = 0; agent < 3; ++agent) {
      residuals(row++) = offset_range(traj, agent, axis).max_sq - max_sq;
    }
  }
  return residuals;
}

Eigen::VectorXd spacing_rows_from_trajectory(const SwarmTrajectory& traj,
                                             const ScenarioConfig& scenario) {
  const double min_sq = scenario.min_tol * scenario.min_tol;
  const double max_sq = scenario.max_tol * scenario.max_tol;
  const int steps = traj.steps();
  const int leader = traj.agent_count() - 1;
  Eigen::VectorXd residuals(12 * steps);
  int row = 0;
  for (int side = 0; side < 2; ++side) {
    for (int axis = 0; axis < 2; ++axis) {
      for (int agent = 0; agent < 3; ++agent) {
        for (int t = 1; t <= steps; ++t) {
          const SwarmState& s = traj.at(t);
          const double d = axis == 0 ? s.pos_x(agent) - s.pos_x(leader)
                                     : s.pos_y(agent) - s.pos_y(leader);
          const double sq = d * d;
          residuals(row++) = side == 0 ? min_sq - sq : sq - max_sq;
        }
      }
    }
  }
  return residuals;
}

Eigen::VectorXd eval_equalities(const Eigen::VectorXd& y, const ScenarioConfig& scenario) {
  return equalities_from_trajectory(y, rollout_design(y, scenario), scenario);
}

Eigen::VectorXd eval_inequalities(const Eigen::VectorXd& y, const ScenarioConfig& scenario) {
  const DesignLayout layout{scenario.steps};
  check_design_size(y, layout);
  return inequalities_from_trajectory(rollout_design(y, scenario), scenario);
}

Eigen::MatrixXd jacobian_fd(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual_fn,
    const Eigen::VectorXd& y, double relative_step) {
  if (!(relative_step > 0.0)) {
    throw ConfigError("finite-difference step must be positive");
  }
  Eigen::VectorXd probe = y;
  Eigen::MatrixXd jac;
  for (int k = 0; k < y.size(); ++k) {
    const double hk = relative_step * std::max(1.0, std::abs(y(k)));
    probe(k) = y(k) + hk;
    const Eigen::VectorXd plus = residual_fn(probe);
    probe(k) = y(k) - hk;
    const Eigen::VectorXd minus = residual_fn(probe);
    probe(k) = y(k);
    if (!plus.allFinite() || !minus.allFinite()) {
      throw NumericalError("finite-difference probe hit a non-finite value at variable " +
                           std::to_string(k + 1));
    }
    if (k == 0) {
      jac.resize(plus.size(), y.size());
    }
    jac.col(k) = (plus - minus) / (2.0 * hk);
  }
  return jac;
}

FeasibilityReport check_feasibility(const Eigen::VectorXd& y,
                                    const ScenarioConfig& scenario) {
  const DesignLayout layout{scenario.steps};
  check_design_size(y, layout);
  FeasibilityReport report;
  char buf[160];

  const Eigen::VectorXd eq = eval_equalities(y, scenario);
  static const char* eq_names[kEqualityCount] = {
      "weight row 1 sum", "weight row 2 sum", "weight row 3 sum",
      "weight row 4 sum", "leader final X",   "leader final Y"};
  for (int i = 0; i < kEqualityCount; ++i) {
    const double v = std::abs(eq(i));
    report.max_equality_violation = std::max(report.max_equality_violation, v);
    if (v > scenario.solver.eq_tol) {
      std::snprintf(buf, sizeof(buf), "%s off by %.3e (tolerance %.1e)",
                    eq_names[i], eq(i), scenario.solver.eq_tol);
      report.violations.push_back(buf);
    }
  }

  const Eigen::VectorXd ineq = eval_inequalities(y, scenario);
  for (int i = 0; i < kInequalityCount; ++i) {
    const double v = std::max(ineq(i), 0.0);
    report.max_inequality_violation = std::max(report.max_inequality_violation, v);
    if (v > scenario.solver.ineq_tol) {
      const bool lower_side = i < 6;
      const int agent = (i % 6) % 3 + 1;
      const char axis = ((i % 6) / 3 == 0) ? 'X' : 'Y';
      std::snprintf(buf, sizeof(buf),
                    "agent %d %c spacing %s violated by %.3e (squared units)",
                    agent, axis, lower_side ? "floor" : "ceiling", v);
      report.violations.push_back(buf);
    }
  }

  for (int i = 0; i < DesignLayout::kAgents; ++i) {
    for (int j = 0; j < DesignLayout::kAgents; ++j) {
      const double w = y(layout.weight_index(i, j));
      const double below = scenario.weight_lower_bound - w;
      const double above = w - 1.0;
      const double worst = std::max({below, above, 0.0});
      if (worst > 0.0) {
        report.max_bound_violation = std::max(report.max_bound_violation, worst);
      }
      if (worst > scenario.solver.ineq_tol) {
        std::snprintf(buf, sizeof(buf), "w[%d][%d] = %.6f leaves [%g, 1]", i + 1,
                      j + 1, w, scenario.weight_lower_bound);
        report.violations.push_back(buf);
      }
    }
  }

  report.feasible = report.violations.empty();
  return report;
}

}  // namespace swarmopt
