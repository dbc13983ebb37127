#include "swarmopt/runner.hpp"

#include <chrono>
#include <cmath>

#include "swarmopt/angles.hpp"
#include "swarmopt/design_vector.hpp"
#include "swarmopt/errors.hpp"

namespace swarmopt {

namespace {

constexpr double kBoundActiveTol = 1e-6;

// Re-express the heading plan through its printed degree form and rebuild
// the design vector from those degrees. Everything downstream (trajectory,
// breakdown, feasibility certificate, artifacts) then describes one single
// plan: the one a reader of the artifacts would reconstruct. The degree/radian
// pair is iterated to a round-trip fixpoint so that re-parsing the printed
// degrees reproduces the stored radians bit for bit; a single conversion pass
// leaves a one-ulp mismatch on a few percent of headings.
Eigen::VectorXd quantize_headings(const Eigen::VectorXd& y, const DesignLayout& layout,
                                  std::vector<double>& degrees_out) {
  Eigen::VectorXd snapped = y;
  degrees_out.resize(static_cast<size_t>(layout.steps));
  for (int t = 1; t <= layout.steps; ++t) {
    double deg = rad_to_deg(y(layout.heading_index(t)));
    double rad = deg_to_rad(deg);
    for (int pass = 0; pass < 4; ++pass) {
      const double deg_back = rad_to_deg(rad);
      if (deg_back == deg) break;
      deg = deg_back;
      rad = deg_to_rad(deg);
    }
    degrees_out[static_cast<size_t>(t - 1)] = deg;
    snapped(layout.heading_index(t)) = rad;
  }
  return snapped;
}

}  // namespace

RunOutcome run_scenario(const ScenarioConfig& scenario) {
  scenario.validate();
  const auto t_begin = std::chrono::steady_clock::now();

  RunOutcome outcome;
  UtopiaReport utopia = compute_utopia(scenario);
  if (!utopia.usable()) {
    outcome.status = RunStatus::utopia_failure;
    outcome.message = "utopia stage failed:";
    for (const auto& note : utopia.notes) {
      outcome.message += "\n  " + note;
    }
    return outcome;
  }

  MultistartReport starts = multistart(scenario, utopia.points);

  const DesignLayout layout{scenario.steps};
  ResultBundle bundle;
  bundle.scenario = scenario;
  bundle.utopia = std::move(utopia);
  bundle.solve = starts.best;

  const Eigen::VectorXd quantized =
      quantize_headings(starts.best.optimum, layout, bundle.leader_headings_deg);
  PackedDesign design = unpack(quantized, layout, scenario.weight_lower_bound);
  bundle.weights = design.coop;
  bundle.leader_row = design.leader_row;
  bundle.trajectory = rollout_design(quantized, scenario);
  bundle.breakdown = evaluate_breakdown(quantized, scenario, bundle.utopia.points);
  bundle.feasibility = check_feasibility(quantized, scenario);
  bundle.starts = std::move(starts);

  bundle.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
          .count();

  const bool feasible = bundle.starts.any_feasible && bundle.feasibility.feasible;
  if (feasible) {
    outcome.status = RunStatus::ok;
    outcome.message = "feasible plan found";
  } else {
    bool all_budget = true;
    for (const auto& rep : bundle.starts.all) {
      if (rep.status != SolveStatus::max_evals && rep.status != SolveStatus::max_iters) {
        all_budget = false;
        break;
      }
    }
    outcome.status = all_budget ? RunStatus::budget_exhausted : RunStatus::infeasible;
    outcome.message = all_budget
                          ? "every start exhausted its budget before reaching "
                            "feasibility"
                          : "no start reached a feasible plan";
    for (const auto& line : bundle.feasibility.violations) {
      outcome.message += "\n  " + line;
    }
  }
  outcome.bundle = std::move(bundle);
  return outcome;
}

StructuralDiff compare_to_reference(const WeightMatrix& candidate,
                                    const WeightMatrix& reference) {
  if (candidate.rows.rows() != 3 || candidate.rows.cols() != 4 ||
      reference.rows.rows() != 3 || reference.rows.cols() != 4) {
    throw DimensionError("weight comparison expects 3 x 4 matrices");
  }
  StructuralDiff diff;
  diff.all_leader_dominant = true;
  const double lb = candidate.lower_bound;
  for (int i = 0; i < 3; ++i) {
    RowComparison& row = diff.rows[static_cast<size_t>(i)];
    const double leader_entry = candidate.rows(i, 3);
    row.leader_dominant = true;
    for (int j = 0; j < 3; ++j) {
      if (candidate.rows(i, j) > leader_entry) row.leader_dominant = false;
    }
    row.bound_active = 0;
    for (int j = 0; j < 4; ++j) {
      if (std::abs(candidate.rows(i, j) - lb) <= kBoundActiveTol) {
        ++row.bound_active;
      }
      row.delta(j) = candidate.rows(i, j) - reference.rows(i, j);
      row.max_abs_delta = std::max(row.max_abs_delta, std::abs(row.delta(j)));
    }
    row.row_sum_residual = candidate.rows.row(i).sum() - 1.0;
    diff.all_leader_dominant = diff.all_leader_dominant && row.leader_dominant;
    diff.total_bound_active += row.bound_active;
    diff.max_abs_delta = std::max(diff.max_abs_delta, row.max_abs_delta);
  }
  return diff;
}

std::optional<WeightMatrix> published_weights(const std::string& scenario_name) {
  WeightMatrix w;
  w.lower_bound = 0.1;
  w.rows.resize(3, 4);
  if (scenario_name == "sim1") {
    w.rows << 0.1, 0.1, 0.1, 0.7,
              0.1, 0.1, 0.1, 0.7,
              0.1, 0.1, 0.1, 0.7;
  } else if (scenario_name == "sim2") {
    w.rows << 0.1,    0.1, 0.2477, 0.5523,
              0.3591, 0.1, 0.1,    0.4409,
              0.2665, 0.1, 0.1,    0.5335;
  } else if (scenario_name == "sim3") {
    w.rows << 0.2067, 0.1, 0.1,    0.5933,
              0.1,    0.1, 0.1,    0.7,
              0.1,    0.1, 0.1478, 0.6522;
  } else {
    return std::nullopt;
  }
  return w;
}

}  // namespace swarmopt
