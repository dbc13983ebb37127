#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "swarmopt/grid.hpp"
#include "swarmopt/objectives.hpp"
#include "swarmopt/sqp.hpp"
#include "swarmopt/swarm_state.hpp"

namespace swarmopt {

// Initial pose of the swarm. Index 3 is the leader; headings are degrees
// (heading 0 points along +Y).
struct Formation {
  std::array<std::array<double, 2>, 4> positions{{{-1.0, 1.0},
                                                  {1.0, 1.0},
                                                  {0.0, 2.0},
                                                  {0.0, 0.0}}};
  std::array<double, 4> headings_deg{0.0, 0.0, 0.0, 0.0};
};

enum class ConsensusUtopiaMode {
  solver,      // minimize the tracking error with a dedicated solve
  metropolis,  // score the Metropolis weight matrix on the nominal headings
};

struct ScenarioConfig {
  std::string name = "custom";
  int steps = 20;
  ObjectiveWeights objective_weights;
  double min_tol = 0.2;
  double max_tol = 5.0;
  std::array<double, 2> target{0.0, 0.0};
  double step_length = 1.0;
  double weight_lower_bound = 0.1;
  Formation formation;
  AreaScoreForm area_score_form = AreaScoreForm::reciprocal_gap;
  ConsensusUtopiaMode consensus_utopia = ConsensusUtopiaMode::solver;
  SolverConfig solver;
  double epsilon_guard = 1e-8;

  // Unset values are derived: cell size defaults to the step length, the grid
  // is centered on the leader start and sized to cover everything reachable
  // in `steps` moves, and smoothing defaults to bbox_temperature =
  // 100 / cell_size and coverage_width = cell_size / 10.
  std::optional<double> grid_cell_size;
  std::optional<int> grid_cells;
  std::optional<std::array<double, 2>> grid_origin;
  std::optional<double> smoothing_beta;
  std::optional<double> smoothing_sigma;

  GridSpec effective_grid() const;
  SmoothingParams effective_smoothing() const;
  SwarmState initial_state() const;  // headings converted to radians

  // Throws ConfigError naming the offending key: non-positive steps or
  // tolerances, min_tol >= max_tol, weights off the simplex, bad bounds,
  // or a target farther than steps * step_length from the leader start.
  void validate() const;
};

// The three canned studies: sim1 (20 steps, equal weighting, target (-3, 11)),
// sim2 (30 steps, equal weighting, target (5, 24)), and sim3 (sim2 with the
// tracking objective weighted 0.75).
std::map<std::string, ScenarioConfig> builtin_scenarios();

// Key=value file with optional [formation], [grid], [smoothing], [solver]
// sections; '#' starts a comment. Unknown keys are errors.
ScenarioConfig load_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin);

// Applies one "key=value" or "section.key=value" override in place.
void apply_override(ScenarioConfig& config, const std::string& assignment);

std::string serialize_scenario(const ScenarioConfig& config);

}  // namespace swarmopt
