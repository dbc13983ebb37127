#pragma once

#include <utility>

#include "swarmopt/grid.hpp"
#include "swarmopt/swarm_state.hpp"

namespace swarmopt {

struct ObjectiveWeights {
  double a1 = 0.5;
  double a2 = 0.5;
  void validate() const;  // a1, a2 >= 0 and a1 + a2 = 1
};

// Best attainable value of each raw objective taken separately. area_best is
// the largest explored area any feasible plan achieved (> 0); rss_best the
// smallest heading tracking error (>= 0).
struct UtopiaPoints {
  double area_best = 1.0;
  double rss_best = 0.0;
  void validate() const;
};

// Knobs for the differentiable surrogate of the explored-area score.
// bbox_temperature sharpens the soft min/max over sample coordinates;
// coverage_width controls how quickly a sample's cell membership falls off
// near cell borders. Both push the surrogate toward the exact score as they
// go to +inf / 0.
struct SmoothingParams {
  double bbox_temperature = 100.0;
  double coverage_width = 0.1;
  double epsilon_guard = 1e-8;
  void validate() const;
};

// Exact explored-area score: bounding-box area of all agent positions at
// steps 0..T, times the number of distinct grid cells those positions touch.
// Positions outside the grid still stretch the box but mark no cell.
double explored_area_exact(const SwarmTrajectory& traj, const GridSpec& grid);

// Differentiable surrogate of the above. Soft box edges via temperature-
// weighted averages of the coordinates, soft cell count via a logistic
// membership in each cell combined across samples per cell.
double explored_area_smooth(const SwarmTrajectory& traj, const GridSpec& grid,
                            const SmoothingParams& smoothing);

// Heading tracking error: sum over t = 1..T and every cooperative agent of
// the squared heading gap to the leader, in squared radians.
double consensus_rss(const SwarmTrajectory& traj);

enum class AreaScoreForm {
  reciprocal_gap,  // area_best / max(|f1 - area_best|, eps)
  ratio,           // area_best / max(f1, eps)
};

// Normalized objectives in [0, inf): smaller is better for both. phi1 shrinks
// as explored area approaches (or exceeds) the utopia area; phi2 grows with
// tracking error above its utopia value.
std::pair<double, double> pseudo_objectives(double f1, double f2,
                                            const UtopiaPoints& utopia,
                                            double epsilon_guard,
                                            AreaScoreForm form = AreaScoreForm::reciprocal_gap);

double scalarize(double phi1, double phi2, const ObjectiveWeights& weights);

}  // namespace swarmopt
