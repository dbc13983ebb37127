#include "swarmopt/driver.hpp"

#include <cmath>
#include <random>

#include "swarmopt/angles.hpp"
#include "swarmopt/consensus.hpp"
#include "swarmopt/constraints.hpp"
#include "swarmopt/design_vector.hpp"
#include "swarmopt/graph.hpp"
#include "swarmopt/problem.hpp"

namespace swarmopt {

namespace {

double metropolis_tracking_error(const ScenarioConfig& scenario) {
  const AgentGraph graph = make_rover_graph();
  const MetropolisResult metro = metropolis_weights(graph, symmetric_degrees(graph));
  const SwarmTrajectory traj =
      rollout(scenario.initial_state(), metro.weights,
              nominal_heading_plan(scenario), scenario.step_length);
  return consensus_rss(traj);
}

}  // namespace

UtopiaReport compute_utopia(const ScenarioConfig& scenario) {
  scenario.validate();
  UtopiaReport report;
  const Eigen::VectorXd start = canonical_start(scenario);
  const UtopiaPoints unused;  // single-objective modes ignore the utopia values

  report.metropolis_rss = metropolis_tracking_error(scenario);

  if (scenario.objective_weights.a1 == 0.0) {
    report.area_skipped = true;
    report.points.area_best = 1.0;  // placeholder, multiplied by a1 == 0
    report.notes.push_back("area utopia skipped: a1 = 0");
  } else {
    const Problem area_problem =
        build_problem(scenario, ProblemMode::area_only, unused);
    SolveReport solve = sqp_minimize(area_problem, start, scenario.solver);
    if (solve.feasible) {
      const SwarmTrajectory traj = rollout_design(solve.optimum, scenario);
      report.points.area_best =
          explored_area_exact(traj, scenario.effective_grid());
      report.area_solved = report.points.area_best > 0.0;
      if (!report.area_solved) {
        report.notes.push_back(
            "area utopia solve landed on a degenerate zero-area plan");
      }
    } else {
      report.notes.push_back(
          std::string("area utopia solve ended infeasible (") +
          to_string(solve.status) + ")");
    }
    report.area_report = std::move(solve);
  }

  if (scenario.objective_weights.a2 == 0.0) {
    report.rss_skipped = true;
    report.points.rss_best = 0.0;
    report.notes.push_back("tracking utopia skipped: a2 = 0");
  } else if (scenario.consensus_utopia == ConsensusUtopiaMode::metropolis) {
    report.points.rss_best = report.metropolis_rss;
    report.rss_solved = true;
    report.notes.push_back("tracking utopia taken from the Metropolis baseline");
  } else {
    const Problem rss_problem =
        build_problem(scenario, ProblemMode::rss_only, unused);
    SolveReport solve = sqp_minimize(rss_problem, start, scenario.solver);
    if (solve.feasible) {
      report.points.rss_best = std::max(solve.objective_value, 0.0);
      report.rss_solved = true;
    } else {
      report.notes.push_back(
          std::string("tracking utopia solve ended infeasible (") +
          to_string(solve.status) + ")");
    }
    report.rss_report = std::move(solve);
  }

  return report;
}

std::vector<Eigen::VectorXd> generate_starts(const ScenarioConfig& scenario,
                                             int count) {
  std::vector<Eigen::VectorXd> starts;
  if (count < 1) return starts;
  starts.reserve(static_cast<size_t>(count));
  starts.push_back(canonical_start(scenario));

  std::mt19937_64 rng(scenario.solver.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> heading_jitter(deg_to_rad(-15.0),
                                                        deg_to_rad(15.0));
  const double lb = scenario.weight_lower_bound;
  const std::vector<double> base_plan = nominal_heading_plan(scenario);
  const DesignLayout layout{scenario.steps};

  for (int s = 1; s < count; ++s) {
    PackedDesign design;
    design.coop.rows.resize(3, 4);
    design.coop.lower_bound = lb;
    // Each row: lower bound plus the remaining mass split by a symmetric
    // Dirichlet draw, which keeps the row on the simplex above the bound.
    auto fill_row = [&](auto&& assign) {
      double gamma[4];
      double total = 0.0;
      for (double& g : gamma) {
        g = -std::log(std::max(unit(rng), 1e-300));
        total += g;
      }
      const double free_mass = 1.0 - 4.0 * lb;
      for (int j = 0; j < 4; ++j) {
        assign(j, lb + free_mass * gamma[j] / total);
      }
    };
    for (int i = 0; i < 3; ++i) {
      fill_row([&](int j, double v) { design.coop.rows(i, j) = v; });
    }
    fill_row([&](int j, double v) { design.leader_row(j) = v; });

    design.leader_headings = base_plan;
    for (double& h : design.leader_headings) {
      h += heading_jitter(rng);
    }
    starts.push_back(pack(design, layout));
  }
  return starts;
}

MultistartReport multistart(const ScenarioConfig& scenario,
                            const UtopiaPoints& utopia) {
  scenario.validate();
  utopia.validate();
  const Problem problem = build_problem(scenario, ProblemMode::joint, utopia);
  const std::vector<Eigen::VectorXd> starts =
      generate_starts(scenario, scenario.solver.multistart_count);

  MultistartReport report;
  report.all.reserve(starts.size());
  int best_feasible = -1;
  int best_fallback = -1;
  double fallback_violation = std::numeric_limits<double>::infinity();

  for (size_t s = 0; s < starts.size(); ++s) {
    SolveReport solve = sqp_minimize(problem, starts[s], scenario.solver);
    solve.start_index = static_cast<int>(s);
    if (solve.feasible) {
      if (best_feasible < 0) {
        best_feasible = static_cast<int>(s);
      } else {
        const SolveReport& incumbent = report.all[static_cast<size_t>(best_feasible)];
        const bool better =
            solve.objective_value < incumbent.objective_value ||
            (solve.objective_value == incumbent.objective_value &&
             solve.func_evals < incumbent.func_evals);
        if (better) best_feasible = static_cast<int>(s);
      }
    } else {
      const double viol =
          solve.max_equality_violation + solve.max_inequality_violation;
      if (viol < fallback_violation) {
        fallback_violation = viol;
        best_fallback = static_cast<int>(s);
      }
    }
    report.all.push_back(std::move(solve));
  }

  report.any_feasible = best_feasible >= 0;
  const int pick = report.any_feasible ? best_feasible : best_fallback;
  report.best = report.all[static_cast<size_t>(pick < 0 ? 0 : pick)];
  return report;
}

}  // namespace swarmopt
