#pragma once

#include <vector>

#include <Eigen/Dense>

#include "swarmopt/objectives.hpp"
#include "swarmopt/scenario.hpp"
#include "swarmopt/sqp.hpp"

namespace swarmopt {

// Which objective the solver chases. The joint mode scalarizes the two
// normalized objectives with the scenario's weights; the single-objective
// modes exist to locate the utopia values.
enum class ProblemMode { joint, area_only, rss_only };

// Nonlinear program over the flat design vector. One trajectory rollout per
// evaluation feeds the objective and every constraint residual; weight
// entries get box bounds [weight_lower_bound, 1], headings are free.
Problem build_problem(const ScenarioConfig& scenario, ProblemMode mode,
                      const UtopiaPoints& utopia);

// Deterministic initial guess: uniform weights and a two-phase heading plan
// (hold one bearing, then another) that lands the leader on the target when
// it is reachable; both bearings come from the two-segment reach solution.
Eigen::VectorXd canonical_start(const ScenarioConfig& scenario);

// The heading schedule used by canonical_start, radians, t = 1..steps.
std::vector<double> nominal_heading_plan(const ScenarioConfig& scenario);

struct ObjectiveBreakdown {
  double area_exact = 0.0;
  double area_smooth = 0.0;
  double tracking_rss = 0.0;
  double phi1 = 0.0;         // from exact area
  double phi2 = 0.0;
  double scalar = 0.0;       // a1 * phi1 + a2 * phi2
  double scalar_smooth = 0.0;  // what the optimizer actually minimized
};

ObjectiveBreakdown evaluate_breakdown(const Eigen::VectorXd& y,
                                      const ScenarioConfig& scenario,
                                      const UtopiaPoints& utopia);

}  // namespace swarmopt
