#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "swarmopt/errors.hpp"
#include "swarmopt/qp.hpp"

using swarmopt::QpProblem;
using swarmopt::QpResult;
using swarmopt::solve_qp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QpProblem unconstrained(int n) {
  QpProblem qp;
  qp.hessian = Eigen::MatrixXd::Identity(n, n);
  qp.gradient = Eigen::VectorXd::Zero(n);
  qp.eq_mat.resize(0, n);
  qp.eq_rhs.resize(0);
  qp.ineq_mat.resize(0, n);
  qp.ineq_rhs.resize(0);
  return qp;
}

}  // namespace

TEST_CASE("unconstrained quadratic lands on the Newton point") {
  QpProblem qp = unconstrained(3);
  qp.gradient << 1.0, -2.0, 0.5;
  const QpResult r = solve_qp(qp);
  CHECK(r.feasible);
  CHECK(r.step(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r.step(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.step(2) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(r.kkt_residual <= 1e-8);
}

TEST_CASE("equality constraint holds exactly") {
  QpProblem qp = unconstrained(2);
  qp.gradient << -1.0, -1.0;
  qp.eq_mat.resize(1, 2);
  qp.eq_mat << 1.0, 1.0;
  qp.eq_rhs.resize(1);
  qp.eq_rhs << -1.0;  // d1 + d2 = 1
  const QpResult r = solve_qp(qp);
  CHECK(r.feasible);
  CHECK(r.step(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.step(1) == doctest::Approx(0.5).epsilon(1e-10));
  REQUIRE(r.eq_multipliers.size() == 1);
  // Stationarity: d + g + lambda * (1,1) = 0 at d = (0.5, 0.5).
  CHECK(r.eq_multipliers(0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("active bound picks up a positive multiplier") {
  QpProblem qp = unconstrained(2);
  qp.gradient << 3.0, 0.0;
  qp.lower.resize(2);
  qp.upper.resize(2);
  qp.lower << -1.0, -1.0;
  qp.upper << 1.0, 1.0;
  const QpResult r = solve_qp(qp);
  CHECK(r.feasible);
  CHECK(r.step(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r.step(1) == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(r.lower_multipliers.size() == 2);
  CHECK(r.lower_multipliers(0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r.upper_multipliers(0) == 0.0);
}

TEST_CASE("binding inequality is honored") {
  // Minimize distance to (2, 0) subject to d1 + d2 <= 1.
  QpProblem qp = unconstrained(2);
  qp.gradient << -2.0, 0.0;
  qp.ineq_mat.resize(1, 2);
  qp.ineq_mat << 1.0, 1.0;
  qp.ineq_rhs.resize(1);
  qp.ineq_rhs << -1.0;
  const QpResult r = solve_qp(qp);
  CHECK(r.feasible);
  CHECK(r.step(0) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(r.step(1) == doctest::Approx(-0.5).epsilon(1e-10));
  REQUIRE(r.ineq_multipliers.size() == 1);
  CHECK(r.ineq_multipliers(0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("random instances match exhaustive active-set enumeration") {
  std::mt19937_64 rng(314159);
  int solved = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const QpProblem qp = oracles::random_qp(rng);
    const auto reference = oracles::enumerate_qp(
        qp.hessian, qp.gradient, qp.eq_mat, qp.eq_rhs, qp.ineq_mat,
        qp.ineq_rhs, qp.lower, qp.upper);
    REQUIRE(reference.solved);

    const QpResult r = solve_qp(qp);
    CHECK(r.feasible);
    CHECK(r.kkt_residual <= 1e-8);
    const double gap = (r.step - reference.solution).lpNorm<Eigen::Infinity>();
    CHECK(gap <= 1e-8);
    const double obj = 0.5 * r.step.dot(qp.hessian * r.step) +
                       qp.gradient.dot(r.step);
    CHECK(obj <= reference.objective + 1e-8);
    ++solved;
  }
  CHECK(solved == 200);
}

TEST_CASE("inconsistent constraints fall back to the elastic relaxation") {
  QpProblem qp = unconstrained(1);
  qp.ineq_mat.resize(2, 1);
  qp.ineq_mat << 1.0, -1.0;
  qp.ineq_rhs.resize(2);
  qp.ineq_rhs << 1.0, 1.0;  // d <= -1 and d >= 1 cannot both hold
  const QpResult r = solve_qp(qp);
  CHECK(!r.feasible);
  REQUIRE(r.step.size() == 1);
  CHECK(std::isfinite(r.step(0)));
  // The relaxed point splits the violation between the two sides.
  CHECK(std::abs(r.step(0)) <= 1.0 + 1e-6);
}

TEST_CASE("an infeasible linearization inside bounds still returns a step") {
  // Equalities demanding a point outside the box cannot be relaxed away by
  // the elastic pass on general rows alone when no inequality rows exist,
  // but with one it must produce something finite.
  QpProblem qp = unconstrained(2);
  qp.lower.resize(2);
  qp.upper.resize(2);
  qp.lower << -0.5, -0.5;
  qp.upper << 0.5, 0.5;
  qp.ineq_mat.resize(1, 2);
  qp.ineq_mat << 1.0, 0.0;
  qp.ineq_rhs.resize(1);
  qp.ineq_rhs << 2.0;  // d1 <= -2 conflicts with d1 >= -0.5
  const QpResult r = solve_qp(qp);
  CHECK(!r.feasible);
  CHECK(r.step(0) >= -0.5 - 1e-9);  // hard bounds stay hard
  CHECK(r.step(0) <= 0.5 + 1e-9);
}

TEST_CASE("shape validation") {
  QpProblem qp = unconstrained(2);
  qp.gradient.resize(3);
  qp.gradient.setZero();
  CHECK_THROWS_AS(solve_qp(qp), swarmopt::DimensionError);

  QpProblem qp2 = unconstrained(2);
  qp2.eq_mat.resize(1, 3);
  qp2.eq_mat.setZero();
  qp2.eq_rhs.resize(1);
  qp2.eq_rhs.setZero();
  CHECK_THROWS_AS(solve_qp(qp2), swarmopt::DimensionError);

  QpProblem qp3 = unconstrained(2);
  qp3.lower.resize(2);
  qp3.upper.resize(2);
  qp3.lower << 1.0, 0.0;
  qp3.upper << -1.0, 1.0;  // crossed box
  CHECK_THROWS_AS(solve_qp(qp3), swarmopt::DimensionError);
}
