#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "swarmopt/objectives.hpp"
#include "swarmopt/scenario.hpp"
#include "swarmopt/sqp.hpp"

namespace swarmopt {

struct UtopiaReport {
  UtopiaPoints points;
  bool area_solved = false;
  bool rss_solved = false;
  bool area_skipped = false;  // a1 == 0: the value would never be used
  bool rss_skipped = false;   // a2 == 0
  // Tracking error of the Metropolis weight matrix on the nominal heading
  // plan; a cheap reference the solver-based value should beat or match.
  double metropolis_rss = std::numeric_limits<double>::quiet_NaN();
  std::optional<SolveReport> area_report;
  std::optional<SolveReport> rss_report;
  std::vector<std::string> notes;

  bool usable() const {
    return (area_solved || area_skipped) && (rss_solved || rss_skipped);
  }
};

// Runs the two single-objective solves from the canonical start (or scores
// the Metropolis matrix when the scenario asks for it) and assembles the
// normalization constants for the joint problem. Deterministic.
UtopiaReport compute_utopia(const ScenarioConfig& scenario);

struct MultistartReport {
  SolveReport best;
  std::vector<SolveReport> all;  // index order = start order
  bool any_feasible = false;
};

// Start points for the joint solve: index 0 is the canonical start, the rest
// jitter weights (per-row simplex resampling above the lower bound) and
// headings (uniform within 15 degrees) from a generator seeded with
// solver.rng_seed. Always returns exactly `count` points.
std::vector<Eigen::VectorXd> generate_starts(const ScenarioConfig& scenario,
                                             int count);

// Solves the joint problem from every start and picks the best feasible
// report (lowest objective; ties broken by fewer evaluations, then lower
// start index). any_feasible = false when every start failed; `best` then
// holds the least-infeasible attempt for diagnostics.
MultistartReport multistart(const ScenarioConfig& scenario,
                            const UtopiaPoints& utopia);

}  // namespace swarmopt
