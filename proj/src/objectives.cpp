#include "swarmopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "swarmopt/errors.hpp"

namespace swarmopt {

namespace {

// coverage_width is the total width of the 0-to-1 transition band a cell
// membership sweeps around the cell border. A logistic rises from ~3e-4 to
// ~1 - 3e-4 across +/-8 scale lengths, so the logistic scale is the band
// width divided by 16.
constexpr double kTransitionBandScales = 16.0;
// Membership beyond this many widths from a cell rounds to zero in double
// precision, so skipping those cells changes nothing.
constexpr double kMembershipCutoffWidths = 40.0;

struct SamplePool {
  std::vector<double> xs;
  std::vector<double> ys;
};

SamplePool collect_samples(const SwarmTrajectory& traj) {
  SamplePool pool;
  const size_t n = traj.states.size() * static_cast<size_t>(traj.agent_count());
  pool.xs.reserve(n);
  pool.ys.reserve(n);
  for (const auto& state : traj.states) {
    for (int i = 0; i < state.agent_count(); ++i) {
      pool.xs.push_back(state.pos_x(i));
      pool.ys.push_back(state.pos_y(i));
    }
  }
  return pool;
}

// Temperature-weighted average of v biased toward its maximum; approaches
// max(v) as beta grows and stays differentiable for finite beta.
double soft_max(const std::vector<double>& v, double beta) {
  const double m = *std::max_element(v.begin(), v.end());
  double num = 0.0;
  double den = 0.0;
  for (double x : v) {
    const double w = std::exp(beta * (x - m));
    num += w * x;
    den += w;
  }
  return num / den;
}

double soft_min(const std::vector<double>& v, double beta) {
  const double m = *std::min_element(v.begin(), v.end());
  double num = 0.0;
  double den = 0.0;
  for (double x : v) {
    const double w = std::exp(beta * (m - x));
    num += w * x;
    den += w;
  }
  return num / den;
}

// Signed distance from a point to the cell square with lower corner (ax, ay):
// positive outside, negative inside, zero on the border.
double cell_signed_distance(double px, double py, double ax, double ay, double h) {
  const double dx = std::max({ax - px, px - (ax + h), 0.0});
  const double dy = std::max({ay - py, py - (ay + h), 0.0});
  if (dx > 0.0 || dy > 0.0) {
    return std::hypot(dx, dy);
  }
  const double inside = std::min({px - ax, ax + h - px, py - ay, ay + h - py});
  return -inside;
}

void require_finite_samples(const SamplePool& pool) {
  for (size_t k = 0; k < pool.xs.size(); ++k) {
    if (!std::isfinite(pool.xs[k]) || !std::isfinite(pool.ys[k])) {
      throw NumericalError("trajectory contains a non-finite position");
    }
  }
}

}  // namespace

void ObjectiveWeights::validate() const {
  if (!(a1 >= 0.0) || !(a2 >= 0.0)) {
    throw ConfigError("objective weights must be non-negative");
  }
  if (std::abs(a1 + a2 - 1.0) > 1e-12) {
    throw ConfigError("objective weights must sum to 1, got " +
                      std::to_string(a1 + a2));
  }
}

void UtopiaPoints::validate() const {
  if (!(area_best > 0.0) || !std::isfinite(area_best)) {
    throw ConfigError("utopia area must be positive and finite");
  }
  if (!(rss_best >= 0.0) || !std::isfinite(rss_best)) {
    throw ConfigError("utopia tracking error must be non-negative and finite");
  }
}

void SmoothingParams::validate() const {
  if (!(bbox_temperature > 0.0) || !(coverage_width > 0.0) ||
      !(epsilon_guard > 0.0)) {
    throw ConfigError("smoothing parameters must be positive");
  }
}

double explored_area_exact(const SwarmTrajectory& traj, const GridSpec& grid) {
  grid.validate();
  if (traj.states.empty()) {
    throw DimensionError("trajectory has no states");
  }
  const SamplePool pool = collect_samples(traj);
  require_finite_samples(pool);

  const auto [xmin_it, xmax_it] = std::minmax_element(pool.xs.begin(), pool.xs.end());
  const auto [ymin_it, ymax_it] = std::minmax_element(pool.ys.begin(), pool.ys.end());
  const double box = (*xmax_it - *xmin_it) * (*ymax_it - *ymin_it);

  std::unordered_set<long long> cells;
  for (size_t k = 0; k < pool.xs.size(); ++k) {
    if (auto cell = grid.cell_of(pool.xs[k], pool.ys[k])) {
      cells.insert(static_cast<long long>((*cell)[0]) * grid.cells_per_side +
                   (*cell)[1]);
    }
  }
  return box * static_cast<double>(cells.size());
}

double explored_area_smooth(const SwarmTrajectory& traj, const GridSpec& grid,
                            const SmoothingParams& smoothing) {
  grid.validate();
  smoothing.validate();
  if (traj.states.empty()) {
    throw DimensionError("trajectory has no states");
  }
  const SamplePool pool = collect_samples(traj);
  require_finite_samples(pool);

  const double beta = smoothing.bbox_temperature;
  const double soft_width_x = soft_max(pool.xs, beta) - soft_min(pool.xs, beta);
  const double soft_width_y = soft_max(pool.ys, beta) - soft_min(pool.ys, beta);

  const double h = grid.cell_size;
  const double w = smoothing.coverage_width / kTransitionBandScales;
  const double cutoff = kMembershipCutoffWidths * w;
  const int reach = static_cast<int>(std::ceil(cutoff / h)) + 1;
  const int c = grid.cells_per_side;

  // miss[cell] = product over samples of (1 - membership); the soft count of
  // a cell is 1 - miss. Cells never touched keep an implicit miss of 1.
  std::unordered_map<long long, double> miss;
  for (size_t k = 0; k < pool.xs.size(); ++k) {
    const double px = pool.xs[k];
    const double py = pool.ys[k];
    const int p0 = static_cast<int>(std::floor((px - grid.origin[0]) / h));
    const int q0 = static_cast<int>(std::floor((py - grid.origin[1]) / h));
    const int p_lo = std::max(0, p0 - reach);
    const int p_hi = std::min(c - 1, p0 + reach);
    const int q_lo = std::max(0, q0 - reach);
    const int q_hi = std::min(c - 1, q0 + reach);
    for (int p = p_lo; p <= p_hi; ++p) {
      for (int q = q_lo; q <= q_hi; ++q) {
        const auto lower = grid.cell_lower(p, q);
        const double s = cell_signed_distance(px, py, lower[0], lower[1], h);
        if (s > cutoff) continue;
        const double memb = 1.0 / (1.0 + std::exp(s / w));
        auto [it, inserted] = miss.try_emplace(
            static_cast<long long>(p) * c + q, 1.0);
        it->second *= (1.0 - memb);
      }
    }
  }
  double soft_count = 0.0;
  for (const auto& [key, value] : miss) {
    soft_count += 1.0 - value;
  }
  return std::max(soft_width_x, 0.0) * std::max(soft_width_y, 0.0) * soft_count;
}

double consensus_rss(const SwarmTrajectory& traj) {
  if (traj.states.empty()) {
    throw DimensionError("trajectory has no states");
  }
  const int m = traj.agent_count();
  double acc = 0.0;
  for (int t = 1; t <= traj.steps(); ++t) {
    const SwarmState& s = traj.at(t);
    const double leader = s.headings(m - 1);
    for (int i = 0; i < m - 1; ++i) {
      const double gap = s.headings(i) - leader;
      acc += gap * gap;
    }
  }
  if (!std::isfinite(acc)) {
    throw NumericalError("tracking error is not finite");
  }
  return acc;
}

std::pair<double, double> pseudo_objectives(double f1, double f2,
                                            const UtopiaPoints& utopia,
                                            double epsilon_guard,
                                            AreaScoreForm form) {
  utopia.validate();
  if (!(epsilon_guard > 0.0)) {
    throw ConfigError("epsilon guard must be positive");
  }
  if (!std::isfinite(f1) || !std::isfinite(f2)) {
    throw NumericalError("objective values must be finite");
  }
  double phi1 = 0.0;
  switch (form) {
    case AreaScoreForm::reciprocal_gap:
      phi1 = utopia.area_best / std::max(std::abs(f1 - utopia.area_best), epsilon_guard);
      break;
    case AreaScoreForm::ratio:
      phi1 = utopia.area_best / std::max(f1, epsilon_guard);
      break;
  }
  const double phi2 =
      std::abs(f2 - utopia.rss_best) / std::max(utopia.rss_best, epsilon_guard);
  return {phi1, phi2};
}

double scalarize(double phi1, double phi2, const ObjectiveWeights& weights) {
  weights.validate();
  return weights.a1 * phi1 + weights.a2 * phi2;
}

}  // namespace swarmopt
