#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "swarmopt/constraints.hpp"
#include "swarmopt/driver.hpp"
#include "swarmopt/problem.hpp"
#include "swarmopt/scenario.hpp"
#include "swarmopt/swarm_state.hpp"
#include "swarmopt/weight_matrix.hpp"

namespace swarmopt {

// Everything a finished optimization run reports. The leader heading plan is
// stored in its printed degree representation and the trajectory is rolled
// from exactly those degrees, so replaying the written artifacts reproduces
// the trajectory bit for bit.
struct ResultBundle {
  ScenarioConfig scenario;
  WeightMatrix weights;        // optimized cooperative rows
  Eigen::Vector4d leader_row;  // inert fourth row, kept for completeness
  std::vector<double> leader_headings_deg;  // t = 1..steps
  SwarmTrajectory trajectory;
  ObjectiveBreakdown breakdown;
  UtopiaReport utopia;
  SolveReport solve;           // the winning start
  MultistartReport starts;
  FeasibilityReport feasibility;
  double wall_seconds = 0.0;
};

enum class RunStatus { ok, infeasible, budget_exhausted, utopia_failure };

struct RunOutcome {
  RunStatus status = RunStatus::utopia_failure;
  std::string message;
  std::optional<ResultBundle> bundle;  // best attempt, present unless utopia failed

  bool ok() const { return status == RunStatus::ok; }
};

// Full pipeline: validate, locate utopia values, multistart the joint solve,
// quantize the winning heading plan to degrees, and certify feasibility
// independently of the solver's own bookkeeping.
RunOutcome run_scenario(const ScenarioConfig& scenario);

struct RowComparison {
  bool leader_dominant = false;   // leader-column entry is the row maximum
  int bound_active = 0;           // entries sitting on the lower bound
  double row_sum_residual = 0.0;  // row sum minus 1
  Eigen::Vector4d delta;          // candidate minus reference
  double max_abs_delta = 0.0;
};

struct StructuralDiff {
  std::array<RowComparison, 3> rows;
  bool all_leader_dominant = false;
  int total_bound_active = 0;
  double max_abs_delta = 0.0;
};

// Structure-level comparison of an optimized weight matrix against a
// published one: per-row leader dominance and bound activity of the
// candidate, plus entrywise deltas. Throws DimensionError on shape mismatch.
StructuralDiff compare_to_reference(const WeightMatrix& candidate,
                                    const WeightMatrix& reference);

// The published optimal weight rows for the built-in scenarios (4 decimal
// places), usable only for structural comparison.
std::optional<WeightMatrix> published_weights(const std::string& scenario_name);

}  // namespace swarmopt
