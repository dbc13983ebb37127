// Acceptance gate for the swarm coverage planner. Each check prints exactly
// one [PASS]/[FAIL] line; the process exits nonzero when any check fails.
// The optimizer checks drive the installed CLI binary end to end and read
// back the artifacts it wrote; the numerical checks compare the library
// against the independent reference implementations in tests/oracles.cpp.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "swarmopt/angles.hpp"
#include "swarmopt/artifacts.hpp"
#include "swarmopt/consensus.hpp"
#include "swarmopt/objectives.hpp"
#include "swarmopt/qp.hpp"
#include "swarmopt/runner.hpp"
#include "swarmopt/scenario.hpp"
#include "swarmopt/sqp.hpp"

namespace fs = std::filesystem;

namespace {

struct Gate {
  int failed = 0;
  int passed = 0;

  void line(bool ok, const std::string& name, const std::string& detail) {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " | ", detail.c_str());
    std::fflush(stdout);
    (ok ? passed : failed) += 1;
  }
};

fs::path work_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "swarmopt_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

int run_cli(const std::string& args) {
  const std::string log = (work_root() / "cli_log.txt").string();
  const std::string command =
      std::string("\"") + SWARMOPT_CLI_PATH + "\" " + args + " >> \"" + log +
      "\" 2>&1";
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// key = value lines from a summary artifact; table sections are skipped.
std::map<std::string, std::string> parse_summary(const fs::path& p) {
  std::map<std::string, std::string> out;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const size_t sep = line.find(" = ");
    if (sep == std::string::npos) continue;
    out[line.substr(0, sep)] = line.substr(sep + 3);
  }
  return out;
}

double summary_number(const std::map<std::string, std::string>& summary,
                      const std::string& key) {
  auto it = summary.find(key);
  if (it == summary.end()) return std::nan("");
  return std::strtod(it->second.c_str(), nullptr);
}

// Numeric cells of a CSV artifact, header and label cells dropped.
std::vector<std::vector<double>> parse_csv(const fs::path& p) {
  std::vector<std::vector<double>> rows;
  std::ifstream in(p);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (first) {  // header
      first = false;
      continue;
    }
    std::vector<double> row;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str()) row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

std::string without_wall_seconds(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("wall_seconds = ", 0) == 0) continue;
    out << line << "\n";
  }
  return out.str();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out << std::setprecision(precision) << v;
  return out.str();
}

struct ScenarioRun {
  int exit_code = -1;
  double seconds = 0.0;
  fs::path dir;
  std::map<std::string, std::string> summary;
  std::vector<std::vector<double>> weights;  // 3 x 4
  std::vector<std::vector<double>> path;     // (T+1) x 9
};

ScenarioRun optimize_via_cli(const std::string& name) {
  ScenarioRun run;
  run.dir = work_root() / ("opt_" + name);
  const auto t0 = std::chrono::steady_clock::now();
  run.exit_code = run_cli("optimize -s " + name + " -q -o \"" +
                          run.dir.string() + "\"");
  run.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  run.summary = parse_summary(run.dir / swarmopt::kSummaryFile);
  run.weights = parse_csv(run.dir / swarmopt::kWeightsFile);
  run.path = parse_csv(run.dir / swarmopt::kPathFile);
  return run;
}

// --- check 1: the three shipped scenarios solve to feasible plans ---------

bool scenario_feasible(const ScenarioRun& run, const swarmopt::ScenarioConfig& cfg,
                       std::string& why) {
  std::ostringstream err;
  if (run.exit_code != 0) {
    err << "exit code " << run.exit_code << "; ";
  }
  if (run.weights.size() != 3) {
    err << "weights artifact has " << run.weights.size() << " rows; ";
  } else {
    for (size_t i = 0; i < 3; ++i) {
      double sum = 0.0;
      for (double w : run.weights[i]) sum += w;
      if (std::abs(sum - 1.0) > 1e-6) {
        err << "row " << i + 1 << " sums to " << fmt(sum, 12) << "; ";
      }
    }
  }
  if (static_cast<int>(run.path.size()) != cfg.steps + 1) {
    err << "path artifact has " << run.path.size() << " rows; ";
  } else {
    const auto& last = run.path.back();
    const double dx = last[7] - cfg.target[0];
    const double dy = last[8] - cfg.target[1];
    const double miss = std::hypot(dx, dy);
    if (miss > 1e-3) {
      err << "leader ends " << fmt(miss) << " from target; ";
    }
    const double lo2 = cfg.min_tol * cfg.min_tol;
    const double hi2 = cfg.max_tol * cfg.max_tol;
    int spacing_bad = 0;
    for (size_t t = 1; t < run.path.size(); ++t) {
      const auto& row = run.path[t];
      for (int i = 0; i < 3; ++i) {
        const double ddx = row[1 + 2 * i] - row[7];
        const double ddy = row[2 + 2 * i] - row[8];
        for (double d2 : {ddx * ddx, ddy * ddy}) {
          if (d2 < lo2 - 1e-6 || d2 > hi2 + 1e-6) ++spacing_bad;
        }
      }
    }
    if (spacing_bad > 0) {
      err << spacing_bad << " spacing violations; ";
    }
  }
  if (run.seconds > 60.0) {
    err << "took " << fmt(run.seconds) << "s (> 60s); ";
  }
  why = err.str();
  return why.empty();
}

// --- check 3 helpers -------------------------------------------------------

Eigen::MatrixXd leader_heavy_rows(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lead(0.4, 0.9);
  std::uniform_real_distribution<double> part(0.01, 1.0);
  Eigen::MatrixXd rows(3, 4);
  for (int i = 0; i < 3; ++i) {
    const double leader = lead(rng);
    double parts[3] = {part(rng), part(rng), part(rng)};
    const double total = parts[0] + parts[1] + parts[2];
    for (int j = 0; j < 3; ++j) {
      rows(i, j) = (1.0 - leader) * parts[j] / total;
    }
    rows(i, 3) = leader;
  }
  return rows;
}

swarmopt::SwarmState diamond_state() {
  swarmopt::SwarmState s;
  s.pos_x.resize(4);
  s.pos_y.resize(4);
  s.headings.resize(4);
  s.pos_x << -1.0, 1.0, 0.0, 0.0;
  s.pos_y << 1.0, 1.0, 2.0, 0.0;
  s.headings.setZero();
  return s;
}

}  // namespace

int main() {
  Gate gate;
  std::printf("swarm planner acceptance checks\n");

  if (!fs::exists(SWARMOPT_CLI_PATH)) {
    gate.line(false, "cli binary present", std::string("missing: ") + SWARMOPT_CLI_PATH);
    return 1;
  }

  const auto builtins = swarmopt::builtin_scenarios();
  const std::vector<std::string> names = {"sim1", "sim2", "sim3"};
  std::map<std::string, ScenarioRun> runs;

  // 1. Feasibility on the three shipped scenarios, via the real CLI.
  {
    std::ostringstream detail;
    bool ok = true;
    for (const auto& name : names) {
      runs[name] = optimize_via_cli(name);
      std::string why;
      const bool good = scenario_feasible(runs[name], builtins.at(name), why);
      ok = ok && good;
      detail << name << " " << (good ? "feasible" : why) << " ("
             << fmt(runs[name].seconds, 3) << "s)  ";
    }
    gate.line(ok, "scenario feasibility: row sums, target hit, spacing, runtime",
              detail.str());
  }

  // 2. Structural agreement with the published weight matrices.
  {
    std::ostringstream detail;
    bool ok = true;
    for (const auto& name : names) {
      const ScenarioRun& run = runs[name];
      if (run.weights.size() != 3 || run.weights[0].size() != 4) {
        ok = false;
        detail << name << " unreadable weights  ";
        continue;
      }
      swarmopt::WeightMatrix candidate;
      candidate.rows.resize(3, 4);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j)
          candidate.rows(i, j) = run.weights[static_cast<size_t>(i)][static_cast<size_t>(j)];
      candidate.lower_bound = builtins.at(name).weight_lower_bound;
      const auto reference = swarmopt::published_weights(name);
      if (!reference) {
        ok = false;
        detail << name << " no reference  ";
        continue;
      }
      const swarmopt::StructuralDiff diff =
          swarmopt::compare_to_reference(candidate, *reference);
      ok = ok && diff.all_leader_dominant;
      detail << name << (diff.all_leader_dominant ? " leader-dominant" : " NOT dominant")
             << ", max delta " << fmt(diff.max_abs_delta, 3) << " (reported)  ";
    }
    gate.line(ok, "structural weight agreement with published matrices", detail.str());
  }

  // 3. Consensus contraction and the two-step turn response.
  {
    std::mt19937_64 rng(2718);
    double worst = 0.0;
    const double command = 0.3;
    for (int rep = 0; rep < 10; ++rep) {
      swarmopt::WeightMatrix w;
      w.rows = leader_heavy_rows(rng);
      swarmopt::SwarmState state = diamond_state();
      std::uniform_real_distribution<double> head(-1.0, 1.0);
      for (int i = 0; i < 3; ++i) state.headings(i) = head(rng);
      state.headings(3) = command;
      const std::vector<double> plan(30, command);
      const swarmopt::SwarmTrajectory traj = swarmopt::rollout(state, w, plan);
      for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(traj.states.back().headings(i) - command));
      }
    }
    const bool contracts = worst < 1e-3;

    // Published Sim I matrix, leader step change of 30 degrees.
    swarmopt::WeightMatrix w = *swarmopt::published_weights("sim1");
    swarmopt::SwarmState state = diamond_state();
    const double turn = swarmopt::deg_to_rad(30.0);
    state.headings(3) = turn;
    const swarmopt::SwarmTrajectory traj =
        swarmopt::rollout(state, w, std::vector<double>{turn, turn});
    bool toward = true;
    double deg1 = 0.0, deg2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double h1 = traj.states[1].headings(i);
      const double h2 = traj.states[2].headings(i);
      deg1 = swarmopt::rad_to_deg(h1);
      deg2 = swarmopt::rad_to_deg(h2);
      const bool step1_moves = h1 > 0.0 && h1 < turn;
      const bool step2_closer = h2 > h1 && h2 < turn;
      toward = toward && step1_moves && step2_closer &&
               std::abs(h1 - 0.7 * turn) < 1e-12 &&
               std::abs(h2 - 0.91 * turn) < 1e-12;
    }
    std::ostringstream detail;
    detail << "30-step error " << fmt(worst, 3) << " rad; two-step response "
           << fmt(deg1, 3) << " deg then " << fmt(deg2, 3) << " deg toward 30 deg";
    gate.line(contracts && toward,
              "consensus contraction and turn-following", detail.str());
  }

  // 4. Objective functions against the independent oracles.
  {
    std::mt19937_64 rng(97);
    double rss_worst = 0.0;
    int area_equal = 0;
    double smooth_worst = 0.0;
    int smooth_checked = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
      const swarmopt::SwarmTrajectory traj =
          oracles::random_trajectory(rng, 10 + rep % 16);
      const double fast_rss = swarmopt::consensus_rss(traj);
      const double slow_rss = oracles::tracking_rss(traj);
      const double scale = std::max(std::abs(slow_rss), 1e-30);
      rss_worst = std::max(rss_worst, std::abs(fast_rss - slow_rss) / scale);

      const swarmopt::GridSpec grid = oracles::covering_grid(traj);
      const double fast_area = swarmopt::explored_area_exact(traj, grid);
      const double slow_area = oracles::explored_area(traj, grid);
      if (fast_area == slow_area) ++area_equal;

      if (fast_area > 0.0) {
        swarmopt::SmoothingParams smoothing;
        smoothing.bbox_temperature = 100.0 / grid.cell_size;
        smoothing.coverage_width = grid.cell_size / 10.0;
        const double soft = swarmopt::explored_area_smooth(traj, grid, smoothing);
        smooth_worst =
            std::max(smooth_worst, std::abs(soft - fast_area) / fast_area);
        ++smooth_checked;
      }
    }
    const bool ok = rss_worst <= 1e-12 && area_equal == reps && smooth_worst <= 0.01;
    std::ostringstream detail;
    detail << "rss max rel err " << fmt(rss_worst, 3) << "; exact area equal "
           << area_equal << "/" << reps << "; surrogate max rel dev "
           << fmt(smooth_worst * 100.0, 3) << "% over " << smooth_checked << " cases";
    gate.line(ok, "objective oracles: tracking error, exact area, surrogate",
              detail.str());
  }

  // 5. Solver verification: QP oracle, two known solves, merit descent.
  {
    std::mt19937_64 rng(314160);
    int qp_ok = 0;
    const int qp_reps = 200;
    double qp_worst = 0.0;
    for (int rep = 0; rep < qp_reps; ++rep) {
      const swarmopt::QpProblem qp = oracles::random_qp(rng);
      const swarmopt::QpResult got = swarmopt::solve_qp(qp);
      const oracles::EnumeratedQp ref = oracles::enumerate_qp(
          qp.hessian, qp.gradient, qp.eq_mat, qp.eq_rhs, qp.ineq_mat,
          qp.ineq_rhs, qp.lower, qp.upper);
      if (!ref.solved || !got.feasible) continue;
      const double gap = (got.step - ref.solution).lpNorm<Eigen::Infinity>();
      qp_worst = std::max(qp_worst, gap);
      if (gap <= 1e-8) ++qp_ok;
    }

    swarmopt::Problem rosen;
    rosen.dimension = 2;
    rosen.objective = [](const Eigen::VectorXd& v) {
      const double a = 1.0 - v(0);
      const double b = v(1) - v(0) * v(0);
      return a * a + 100.0 * b * b;
    };
    swarmopt::SolverConfig cfg;
    cfg.max_iters = 500;
    cfg.max_func_evals = 100000;
    const swarmopt::SolveReport rosen_report =
        swarmopt::sqp_minimize(rosen, Eigen::Vector2d(-1.2, 1.0), cfg);
    const bool rosen_ok = std::abs(rosen_report.optimum(0) - 1.0) <= 1e-6 &&
                          std::abs(rosen_report.optimum(1) - 1.0) <= 1e-6;

    swarmopt::Problem eq_quad;
    eq_quad.dimension = 2;
    eq_quad.objective = [](const Eigen::VectorXd& v) { return 0.5 * v.squaredNorm(); };
    eq_quad.equalities = [](const Eigen::VectorXd& v) {
      Eigen::VectorXd r(1);
      r(0) = v(0) + v(1) - 1.0;
      return r;
    };
    const swarmopt::SolveReport eq_report =
        swarmopt::sqp_minimize(eq_quad, Eigen::Vector2d(2.0, -1.0), cfg);
    const bool eq_ok = std::abs(eq_report.optimum(0) - 0.5) <= 1e-6 &&
                       std::abs(eq_report.optimum(1) - 0.5) <= 1e-6;

    int merit_pairs = 0;
    int merit_bad = 0;
    for (const auto& name : names) {
      const swarmopt::RunOutcome outcome = swarmopt::run_scenario(builtins.at(name));
      if (!outcome.bundle.has_value()) {
        ++merit_bad;
        continue;
      }
      for (const auto& report : outcome.bundle->starts.all) {
        for (const auto& [before, after] : report.merit_history) {
          ++merit_pairs;
          if (!(after < before)) ++merit_bad;
        }
      }
    }

    const bool ok = qp_ok == qp_reps && rosen_ok && eq_ok && merit_bad == 0;
    std::ostringstream detail;
    detail << "qp " << qp_ok << "/" << qp_reps << " within 1e-8 (worst gap "
           << fmt(qp_worst, 3) << "); rosenbrock " << (rosen_ok ? "ok" : "FAILED")
           << "; equality quadratic " << (eq_ok ? "ok" : "FAILED") << "; merit pairs "
           << merit_pairs - merit_bad << "/" << merit_pairs << " decreasing";
    gate.line(ok, "solver verification against references", detail.str());
  }

  // 6. Work done on sim1 matches the expected effort or converged tightly.
  {
    const auto& summary = runs["sim1"].summary;
    const double evals = summary_number(summary, "func_evals");
    const double kkt = summary_number(summary, "kkt_residual");
    const bool ok = evals > 1000.0 || kkt < 1e-6;
    std::ostringstream detail;
    detail << "func_evals " << fmt(evals, 6) << ", kkt residual " << fmt(kkt, 3);
    gate.line(ok, "optimizer effort consistent on sim1", detail.str());
  }

  // 7. Determinism of repeated runs and of artifact replay.
  {
    const fs::path dir_a = work_root() / "det_a";
    const fs::path dir_b = work_root() / "det_b";
    const std::string overrides = " --set solver.multistart_count=2 -q ";
    const int code_a =
        run_cli("optimize -s sim1" + overrides + "-o \"" + dir_a.string() + "\"");
    const int code_b =
        run_cli("optimize -s sim1" + overrides + "-o \"" + dir_b.string() + "\"");

    bool ok = code_a == 0 && code_b == 0;
    std::ostringstream detail;
    for (const char* leaf :
         {swarmopt::kHeadingsFile, swarmopt::kPathFile, swarmopt::kWeightsFile}) {
      if (slurp(dir_a / leaf) != slurp(dir_b / leaf)) {
        ok = false;
        detail << leaf << " differs; ";
      }
    }
    const bool summary_same = without_wall_seconds(slurp(dir_a / swarmopt::kSummaryFile)) ==
                              without_wall_seconds(slurp(dir_b / swarmopt::kSummaryFile));
    if (!summary_same) {
      ok = false;
      detail << "summary differs beyond wall_seconds; ";
    }

    const fs::path dir_r = work_root() / "det_replay";
    const int code_r = run_cli(
        "rollout -s sim1 -q --weights \"" + (dir_a / swarmopt::kWeightsFile).string() +
        "\" --headings \"" + (dir_a / swarmopt::kHeadingsFile).string() + "\" -o \"" +
        dir_r.string() + "\"");
    const bool replay_ok =
        code_r == 0 &&
        slurp(dir_r / swarmopt::kPathFile) == slurp(dir_a / swarmopt::kPathFile) &&
        slurp(dir_r / swarmopt::kHeadingsFile) == slurp(dir_a / swarmopt::kHeadingsFile);
    if (!replay_ok) {
      ok = false;
      detail << "replay not byte-identical (exit " << code_r << "); ";
    }
    if (ok) {
      detail << "repeat runs byte-identical (summary compared without wall_seconds); "
                "replay byte-identical";
    }
    gate.line(ok, "determinism and artifact replay", detail.str());
  }

  // 8. Raising the consensus weight cannot worsen consensus (sim2 vs sim3).
  {
    const double rss_half = summary_number(runs["sim2"].summary, "tracking_rss");
    const double rss_heavy = summary_number(runs["sim3"].summary, "tracking_rss");
    const double area_half = summary_number(runs["sim2"].summary, "area_exact");
    const double area_heavy = summary_number(runs["sim3"].summary, "area_exact");
    const bool ok = std::isfinite(rss_half) && std::isfinite(rss_heavy) &&
                    rss_heavy <= rss_half;
    std::ostringstream detail;
    detail << "tracking rss " << fmt(rss_half, 6) << " -> " << fmt(rss_heavy, 6)
           << "; explored area " << fmt(area_half, 6) << " -> "
           << fmt(area_heavy, 6) << " (reported)";
    gate.line(ok, "consensus-weighting sensitivity, sim2 vs sim3", detail.str());
  }

  std::printf("acceptance: %d/%d checks passed\n", gate.passed,
              gate.passed + gate.failed);
  return gate.failed == 0 ? 0 : 1;
}
