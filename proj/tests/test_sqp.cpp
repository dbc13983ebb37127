#include <cmath>
#include <limits>

#include <doctest.h>

#include "swarmopt/errors.hpp"
#include "swarmopt/sqp.hpp"

using swarmopt::bfgs_update;
using swarmopt::EvalBundle;
using swarmopt::line_search;
using swarmopt::Problem;
using swarmopt::SolveReport;
using swarmopt::SolverConfig;
using swarmopt::SolveStatus;
using swarmopt::sqp_minimize;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

SolverConfig quiet_config() {
  SolverConfig cfg;
  cfg.max_iters = 200;
  return cfg;
}

}  // namespace

TEST_CASE("undamped curvature update satisfies the secant equation") {
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd s = vec2(1.0, 0.0);
  const Eigen::VectorXd y = vec2(3.0, 0.0);
  const Eigen::MatrixXd next = bfgs_update(b, s, y, 0.2);
  CHECK(next(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(next(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(next(0, 1) == doctest::Approx(0.0).epsilon(1e-14));
  const Eigen::VectorXd secant = next * s;
  CHECK(secant(0) == doctest::Approx(y(0)).epsilon(1e-14));
}

TEST_CASE("damping keeps the update positive definite under negative curvature") {
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd s = vec2(1.0, 0.0);
  const Eigen::VectorXd y = vec2(-1.0, 0.0);  // s'y = -1 < 0
  const Eigen::MatrixXd next = bfgs_update(b, s, y, 0.2);
  // theta = 0.8 * 1 / (1 - (-1)) = 0.4, r = (0.2, 0), s'r = damping * s'Bs.
  CHECK(next(0, 0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(next(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(next);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("degenerate update inputs leave the matrix unchanged") {
  const Eigen::MatrixXd b = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  CHECK(bfgs_update(b, vec2(0.0, 0.0), vec2(1.0, 1.0), 0.2) == b);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(bfgs_update(b, vec2(1.0, 0.0), vec2(nan, 0.0), 0.2) == b);
}

TEST_CASE("positive definiteness survives a long random update chain") {
  std::srand(42);
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(4, 4);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::VectorXd s = Eigen::VectorXd::Random(4);
    const Eigen::VectorXd y = Eigen::VectorXd::Random(4);
    b = bfgs_update(b, s, y, 0.2);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
  CHECK((b - b.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("full step passes the sufficient-decrease test") {
  Eigen::VectorXd y(1), step(1);
  y << 1.0;
  step << -1.0;
  const auto merit = [](const Eigen::VectorXd& v) { return v(0) * v(0); };
  const auto r = line_search(merit, y, step, 1.0, -2.0, 1e-4, 0.5);
  CHECK(r.success);
  CHECK(r.step_scale == 1.0);
  CHECK(r.merit_after == 0.0);
  CHECK(r.evals == 1);
  CHECK(r.accepted(0) == 0.0);
}

TEST_CASE("overshooting step backtracks exactly once") {
  Eigen::VectorXd y(1), step(1);
  y << 1.0;
  step << -3.0;
  const auto merit = [](const Eigen::VectorXd& v) { return v(0) * v(0); };
  const auto r = line_search(merit, y, step, 1.0, -6.0, 1e-4, 0.5);
  CHECK(r.success);
  CHECK(r.step_scale == 0.5);
  CHECK(r.merit_after == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r.evals == 2);
  CHECK(r.accepted(0) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("flat merit exhausts the backtrack budget") {
  Eigen::VectorXd y(1), step(1);
  y << 0.0;
  step << 1.0;
  const auto merit = [](const Eigen::VectorXd&) { return 5.0; };
  const auto r = line_search(merit, y, step, 5.0, -1.0, 1e-4, 0.5, 30);
  CHECK(!r.success);
  CHECK(r.evals == 30);
  CHECK(r.accepted(0) == 0.0);  // falls back to the starting point
}

TEST_CASE("non-finite merit values reject the trial point") {
  Eigen::VectorXd y(1), step(1);
  y << 0.0;
  step << 1.0;
  const auto merit = [](const Eigen::VectorXd& v) {
    return v(0) > 0.75 ? std::numeric_limits<double>::quiet_NaN() : 1.0 - v(0);
  };
  const auto r = line_search(merit, y, step, 1.0, -1.0, 1e-4, 0.5);
  CHECK(r.success);
  CHECK(r.step_scale == 0.5);
}

TEST_CASE("rosenbrock reaches the valley floor") {
  Problem p;
  p.dimension = 2;
  p.objective = [](const Eigen::VectorXd& v) {
    const double a = 1.0 - v(0);
    const double b = v(1) - v(0) * v(0);
    return a * a + 100.0 * b * b;
  };
  const SolveReport report = sqp_minimize(p, vec2(-1.2, 1.0), quiet_config());
  CHECK(report.status == SolveStatus::converged);
  CHECK(report.feasible);
  CHECK(report.optimum(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(report.optimum(1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(report.objective_value <= 1e-10);
}

TEST_CASE("equality-constrained quadratic hits the known stationary point") {
  Problem p;
  p.dimension = 2;
  p.objective = [](const Eigen::VectorXd& v) { return 0.5 * v.squaredNorm(); };
  p.equalities = [](const Eigen::VectorXd& v) {
    Eigen::VectorXd c(1);
    c << v(0) + v(1) - 1.0;
    return c;
  };
  const SolveReport report = sqp_minimize(p, vec2(2.0, -1.0), quiet_config());
  CHECK(report.status == SolveStatus::converged);
  CHECK(report.feasible);
  CHECK(report.optimum(0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(report.optimum(1) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(report.max_equality_violation <= 1e-8);
  CHECK(report.kkt_residual < quiet_config().kkt_tol);
}

TEST_CASE("inequality keeps the iterate on the feasible side") {
  Problem p;
  p.dimension = 1;
  p.objective = [](const Eigen::VectorXd& v) {
    return (v(0) - 2.0) * (v(0) - 2.0);
  };
  p.inequalities = [](const Eigen::VectorXd& v) {
    Eigen::VectorXd c(1);
    c << v(0) - 1.0;  // x <= 1
    return c;
  };
  Eigen::VectorXd y0(1);
  y0 << -2.0;
  const SolveReport report = sqp_minimize(p, y0, quiet_config());
  CHECK(report.status == SolveStatus::converged);
  CHECK(report.feasible);
  CHECK(report.optimum(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(report.max_inequality_violation <= 1e-8);
}

TEST_CASE("box bounds are respected at every accepted iterate") {
  Problem p;
  p.dimension = 2;
  p.objective = [](const Eigen::VectorXd& v) {
    return (v(0) - 5.0) * (v(0) - 5.0) + (v(1) + 5.0) * (v(1) + 5.0);
  };
  p.lower = vec2(-1.0, -1.0);
  p.upper = vec2(1.0, 1.0);
  const SolveReport report = sqp_minimize(p, vec2(0.0, 0.0), quiet_config());
  CHECK(report.status == SolveStatus::converged);
  CHECK(report.optimum(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(report.optimum(1) == doctest::Approx(-1.0).epsilon(1e-8));

  Eigen::VectorXd outside = vec2(3.0, 0.0);
  CHECK_THROWS_AS(sqp_minimize(p, outside, quiet_config()), std::invalid_argument);
}

TEST_CASE("merit history decreases strictly on accepted steps") {
  Problem p;
  p.dimension = 2;
  p.objective = [](const Eigen::VectorXd& v) {
    const double a = 1.0 - v(0);
    const double b = v(1) - v(0) * v(0);
    return a * a + 100.0 * b * b;
  };
  const SolveReport report = sqp_minimize(p, vec2(-1.2, 1.0), quiet_config());
  REQUIRE(!report.merit_history.empty());
  for (const auto& [before, after] : report.merit_history) {
    CHECK(after < before);
  }
}

TEST_CASE("evaluation budget stops the solve early") {
  Problem p;
  p.dimension = 2;
  p.objective = [](const Eigen::VectorXd& v) { return v.squaredNorm(); };
  SolverConfig cfg;
  cfg.max_func_evals = 3;  // not even one finite-difference sweep
  const SolveReport report = sqp_minimize(p, vec2(3.0, 4.0), cfg);
  CHECK(report.status == SolveStatus::max_evals);
  CHECK(report.func_evals <= 3);
}

TEST_CASE("iteration cap reports max_iters") {
  Problem p;
  p.dimension = 2;
  p.objective = [](const Eigen::VectorXd& v) {
    const double a = 1.0 - v(0);
    const double b = v(1) - v(0) * v(0);
    return a * a + 100.0 * b * b;
  };
  SolverConfig cfg;
  cfg.max_iters = 2;
  const SolveReport report = sqp_minimize(p, vec2(-1.2, 1.0), cfg);
  CHECK(report.status == SolveStatus::max_iters);
  CHECK(report.iterations == 2);
}

TEST_CASE("solver configuration validation") {
  SolverConfig cfg;
  cfg.bfgs_damping = 1.5;
  CHECK_THROWS_AS(cfg.validate(), swarmopt::ConfigError);
  cfg = SolverConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), swarmopt::ConfigError);
  cfg = SolverConfig{};
  cfg.backtrack_factor = 1.0;
  CHECK_THROWS_AS(cfg.validate(), swarmopt::ConfigError);
}

TEST_CASE("missing objective is rejected") {
  Problem p;
  p.dimension = 2;
  CHECK_THROWS_AS(sqp_minimize(p, vec2(0.0, 0.0), SolverConfig{}),
                  swarmopt::ConfigError);
}
