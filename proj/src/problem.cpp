#include "swarmopt/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarmopt/angles.hpp"
#include "swarmopt/constraints.hpp"
#include "swarmopt/design_vector.hpp"

namespace swarmopt {

Problem build_problem(const ScenarioConfig& scenario, ProblemMode mode,
                      const UtopiaPoints& utopia) {
  const DesignLayout layout{scenario.steps};
  const GridSpec grid = scenario.effective_grid();
  const SmoothingParams smoothing = scenario.effective_smoothing();
  const ObjectiveWeights weights = scenario.objective_weights;
  const AreaScoreForm form = scenario.area_score_form;
  const double eps = scenario.epsilon_guard;

  Problem problem;
  problem.dimension = layout.size();
  problem.bundle = [scenario, mode, utopia, grid, smoothing, weights, form,
                    eps](const Eigen::VectorXd& y) {
    const SwarmTrajectory traj = rollout_design(y, scenario);
    EvalBundle bundle;
    switch (mode) {
      case ProblemMode::joint: {
        const double area = explored_area_smooth(traj, grid, smoothing);
        const double rss = consensus_rss(traj);
        const auto [phi1, phi2] = pseudo_objectives(area, rss, utopia, eps, form);
        bundle.objective = scalarize(phi1, phi2, weights);
        break;
      }
      case ProblemMode::area_only:
        bundle.objective = -explored_area_smooth(traj, grid, smoothing);
        break;
      case ProblemMode::rss_only:
        bundle.objective = consensus_rss(traj);
        break;
    }
    bundle.equalities = equalities_from_trajectory(y, traj, scenario);
    // The solver differentiates these rows, so it gets the per-step form;
    // the aggregated 12-row report stays the external certification surface.
    bundle.inequalities = spacing_rows_from_trajectory(traj, scenario);
    return bundle;
  };

  const double inf = std::numeric_limits<double>::infinity();
  problem.lower = Eigen::VectorXd::Constant(layout.size(), -inf);
  problem.upper = Eigen::VectorXd::Constant(layout.size(), inf);
  for (int k = 0; k < DesignLayout::kWeightCount; ++k) {
    problem.lower(k) = scenario.weight_lower_bound;
    problem.upper(k) = 1.0;
  }
  return problem;
}

std::vector<double> nominal_heading_plan(const ScenarioConfig& scenario) {
  const int steps = scenario.steps;
  const double alpha = scenario.step_length;
  const double dx = scenario.target[0] - scenario.formation.positions[3][0];
  const double dy = scenario.target[1] - scenario.formation.positions[3][1];
  const double dist = std::hypot(dx, dy);
  const double bearing = std::atan2(dx, dy);

  std::vector<double> plan(static_cast<size_t>(steps), bearing);
  if (dist >= steps * alpha - 1e-12) {
    return plan;  // straight shot (or as close as the budget allows)
  }

  // Two-segment reach: hold heading theta1 for k steps, theta2 for the rest.
  // With segment lengths L1 and L2 the triangle start-elbow-target fixes the
  // angle between the first segment and the target bearing.
  const int k = std::max(1, steps / 2);
  const double l1 = k * alpha;
  const double l2 = (steps - k) * alpha;
  double theta1 = bearing;
  double theta2 = bearing;
  if (dist < 1e-12) {
    // Out and back as nearly as the split allows.
    theta1 = 0.0;
    theta2 = std::numbers::pi;
  } else {
    const double cos_split =
        std::clamp((l1 * l1 + dist * dist - l2 * l2) / (2.0 * l1 * dist), -1.0, 1.0);
    const double split = std::acos(cos_split);
    theta1 = bearing + split;
    const double ex = l1 * std::sin(theta1);
    const double ey = l1 * std::cos(theta1);
    theta2 = std::atan2(dx - ex, dy - ey);
  }
  for (int t = 0; t < steps; ++t) {
    plan[static_cast<size_t>(t)] = t < k ? theta1 : theta2;
  }
  return plan;
}

Eigen::VectorXd canonical_start(const ScenarioConfig& scenario) {
  const DesignLayout layout{scenario.steps};
  PackedDesign design;
  design.coop.rows = Eigen::MatrixXd::Constant(3, 4, 0.25);
  design.coop.lower_bound = scenario.weight_lower_bound;
  design.leader_row = Eigen::Vector4d::Constant(0.25);
  design.leader_headings = nominal_heading_plan(scenario);
  return pack(design, layout);
}

ObjectiveBreakdown evaluate_breakdown(const Eigen::VectorXd& y,
                                      const ScenarioConfig& scenario,
                                      const UtopiaPoints& utopia) {
  const SwarmTrajectory traj = rollout_design(y, scenario);
  const GridSpec grid = scenario.effective_grid();

  ObjectiveBreakdown out;
  out.area_exact = explored_area_exact(traj, grid);
  out.area_smooth = explored_area_smooth(traj, grid, scenario.effective_smoothing());
  out.tracking_rss = consensus_rss(traj);

  const auto [phi1, phi2] =
      pseudo_objectives(out.area_exact, out.tracking_rss, utopia,
                        scenario.epsilon_guard, scenario.area_score_form);
  out.phi1 = phi1;
  out.phi2 = phi2;
  out.scalar = scalarize(phi1, phi2, scenario.objective_weights);

  const auto [phi1s, phi2s] =
      pseudo_objectives(out.area_smooth, out.tracking_rss, utopia,
                        scenario.epsilon_guard, scenario.area_score_form);
  out.scalar_smooth = scalarize(phi1s, phi2s, scenario.objective_weights);
  return out;
}

}  // namespace swarmopt
