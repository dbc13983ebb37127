#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarmopt/angles.hpp"
#include "swarmopt/artifacts.hpp"
#include "swarmopt/consensus.hpp"
#include "swarmopt/driver.hpp"
#include "swarmopt/errors.hpp"
#include "swarmopt/objectives.hpp"
#include "swarmopt/runner.hpp"
#include "swarmopt/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInput = 4;

struct CommonArgs {
  std::string scenario;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool has_seed = false;
  unsigned long long seed = 0;
  bool quiet = false;
};

swarmopt::ScenarioConfig resolve_scenario(const CommonArgs& args) {
  const auto builtins = swarmopt::builtin_scenarios();
  swarmopt::ScenarioConfig cfg;
  if (auto it = builtins.find(args.scenario); it != builtins.end()) {
    cfg = it->second;
  } else if (std::filesystem::exists(args.scenario)) {
    cfg = swarmopt::load_scenario_file(args.scenario);
  } else {
    throw swarmopt::ConfigError("'" + args.scenario +
                                "' is neither a built-in scenario nor a file");
  }
  for (const auto& assignment : args.overrides) {
    swarmopt::apply_override(cfg, assignment);
  }
  if (args.has_seed) {
    cfg.solver.rng_seed = args.seed;
  }
  return cfg;
}

std::string default_out_dir(const std::string& scenario_name) {
  return (std::filesystem::path("artifacts") / scenario_name).string();
}

int exit_code_for(swarmopt::RunStatus status) {
  switch (status) {
    case swarmopt::RunStatus::ok: return kExitOk;
    case swarmopt::RunStatus::infeasible: return kExitInfeasible;
    case swarmopt::RunStatus::budget_exhausted: return kExitBudget;
    case swarmopt::RunStatus::utopia_failure: return kExitInfeasible;
  }
  return kExitInternal;
}

int cmd_optimize(const CommonArgs& args) {
  swarmopt::ScenarioConfig cfg = resolve_scenario(args);
  cfg.validate();
  const std::string out_dir =
      args.out_dir.empty() ? default_out_dir(cfg.name) : args.out_dir;

  const swarmopt::RunOutcome outcome = swarmopt::run_scenario(cfg);
  swarmopt::write_artifacts(out_dir, outcome);

  if (!args.quiet) {
    if (outcome.bundle.has_value()) {
      const swarmopt::ResultBundle& b = *outcome.bundle;
      std::printf(
          "%s: %s | objective %.6g | area %.6g | tracking %.6g rad^2 | "
          "evals %d | %.2fs | artifacts in %s\n",
          cfg.name.c_str(), outcome.message.c_str(), b.breakdown.scalar,
          b.breakdown.area_exact, b.breakdown.tracking_rss, b.solve.func_evals,
          b.wall_seconds, out_dir.c_str());
    } else {
      std::printf("%s: %s\n", cfg.name.c_str(), outcome.message.c_str());
    }
  }
  return exit_code_for(outcome.status);
}

int cmd_rollout(const CommonArgs& args, const std::string& weights_path,
                const std::string& headings_path) {
  swarmopt::ScenarioConfig cfg = resolve_scenario(args);
  cfg.validate();
  const std::string out_dir =
      args.out_dir.empty() ? default_out_dir(cfg.name + "_rollout") : args.out_dir;

  swarmopt::WeightMatrix weights;
  weights.rows = swarmopt::read_weights_csv(weights_path);
  weights.lower_bound = 0.0;  // replay accepts any valid stochastic matrix

  const std::vector<double> headings_deg =
      swarmopt::read_leader_headings_deg(headings_path, cfg.steps);
  std::vector<double> headings_rad(headings_deg.size());
  for (size_t i = 0; i < headings_deg.size(); ++i) {
    headings_rad[i] = swarmopt::deg_to_rad(headings_deg[i]);
  }

  swarmopt::SwarmTrajectory traj;
  try {
    traj = swarmopt::rollout(cfg.initial_state(), weights, headings_rad,
                             cfg.step_length);
  } catch (const swarmopt::InvalidWeightsError& err) {
    std::fprintf(stderr, "invalid weights: %s\n", err.what());
    for (int i = 0; i < weights.rows.rows(); ++i) {
      std::fprintf(stderr, "  row %d sum = %.17g\n", i + 1,
                   weights.rows.row(i).sum());
    }
    return kExitInput;
  }

  swarmopt::write_trajectory_artifacts(out_dir, traj);
  if (!args.quiet) {
    const swarmopt::GridSpec grid = cfg.effective_grid();
    std::printf("%s: replayed %d steps | area %.6g | tracking %.6g rad^2 | "
                "artifacts in %s\n",
                cfg.name.c_str(), traj.steps(),
                swarmopt::explored_area_exact(traj, grid),
                swarmopt::consensus_rss(traj), out_dir.c_str());
  }
  return kExitOk;
}

int cmd_utopia(const CommonArgs& args) {
  swarmopt::ScenarioConfig cfg = resolve_scenario(args);
  cfg.validate();
  const swarmopt::UtopiaReport report = swarmopt::compute_utopia(cfg);

  std::string text;
  text += "scenario = " + cfg.name + "\n";
  text += "utopia_area = " + swarmopt::format_full(report.points.area_best) + "\n";
  text += "utopia_rss = " + swarmopt::format_full(report.points.rss_best) + "\n";
  text += "utopia_rss_metropolis = " +
          swarmopt::format_full(report.metropolis_rss) + "\n";
  text += std::string("area_solved = ") + (report.area_solved ? "true" : "false") + "\n";
  text += std::string("rss_solved = ") + (report.rss_solved ? "true" : "false") + "\n";
  if (report.area_report.has_value()) {
    text += std::string("area_solver_status = ") +
            swarmopt::to_string(report.area_report->status) + "\n";
    text += "area_func_evals = " + std::to_string(report.area_report->func_evals) + "\n";
  }
  if (report.rss_report.has_value()) {
    text += std::string("rss_solver_status = ") +
            swarmopt::to_string(report.rss_report->status) + "\n";
    text += "rss_func_evals = " + std::to_string(report.rss_report->func_evals) + "\n";
  }
  for (const auto& note : report.notes) {
    text += "# " + note + "\n";
  }

  if (!args.out_dir.empty()) {
    std::filesystem::create_directories(args.out_dir);
    const std::string path =
        (std::filesystem::path(args.out_dir) / "utopia.txt").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
  }
  if (!args.quiet) {
    std::fputs(text.c_str(), stdout);
  }
  return report.usable() ? kExitOk : kExitInfeasible;
}

int cmd_scenarios() {
  std::printf("%-6s %5s %5s %5s %8s %8s %14s\n", "name", "steps", "a1", "a2",
              "min_tol", "max_tol", "target");
  for (const auto& [name, cfg] : swarmopt::builtin_scenarios()) {
    std::printf("%-6s %5d %5.2f %5.2f %8.3g %8.3g   (%g, %g)\n", name.c_str(),
                cfg.steps, cfg.objective_weights.a1, cfg.objective_weights.a2,
                cfg.min_tol, cfg.max_tol, cfg.target[0], cfg.target[1]);
  }
  return kExitOk;
}

int cmd_validate(const CommonArgs& args) {
  swarmopt::ScenarioConfig cfg = resolve_scenario(args);
  cfg.validate();
  if (!args.quiet) {
    std::printf("%s: configuration is valid\n", cfg.name.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leader-follower swarm coverage planner"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string weights_path;
  std::string headings_path;

  auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
    if (needs_scenario) {
      cmd->add_option("-s,--scenario", args.scenario,
                      "built-in scenario name or config file path")
          ->required();
    }
    cmd->add_option("--set", args.overrides,
                    "override a config key, e.g. --set solver.max_iters=50");
    cmd->add_flag("-q,--quiet", args.quiet, "suppress the info line");
  };

  CLI::App* optimize = app.add_subcommand("optimize", "solve a scenario");
  add_common(optimize);
  optimize->add_option("-o,--out", args.out_dir, "artifact output directory");
  optimize->add_option("--seed", args.seed, "override solver.seed")
      ->each([&](const std::string&) { args.has_seed = true; });

  CLI::App* rollout = app.add_subcommand(
      "rollout", "replay a weight matrix and heading schedule");
  add_common(rollout);
  rollout->add_option("-o,--out", args.out_dir, "artifact output directory");
  rollout->add_option("--weights", weights_path, "weights artifact to replay")
      ->required();
  rollout->add_option("--headings", headings_path, "headings artifact to replay")
      ->required();

  CLI::App* utopia = app.add_subcommand(
      "utopia", "compute per-objective optima and the consensus baseline");
  add_common(utopia);
  utopia->add_option("-o,--out", args.out_dir, "directory for utopia.txt");
  utopia->add_option("--seed", args.seed, "override solver.seed")
      ->each([&](const std::string&) { args.has_seed = true; });

  CLI::App* scenarios = app.add_subcommand("scenarios", "list built-in scenarios");
  (void)scenarios;

  CLI::App* validate = app.add_subcommand("validate", "check a configuration");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (app.got_subcommand(optimize)) return cmd_optimize(args);
    if (app.got_subcommand(rollout)) return cmd_rollout(args, weights_path, headings_path);
    if (app.got_subcommand(utopia)) return cmd_utopia(args);
    if (app.got_subcommand(scenarios)) return cmd_scenarios();
    if (app.got_subcommand(validate)) return cmd_validate(args);
  } catch (const swarmopt::ConfigError& err) {
    std::fprintf(stderr, "configuration error: %s\n", err.what());
    return kExitInput;
  } catch (const swarmopt::InvalidWeightsError& err) {
    std::fprintf(stderr, "invalid weights: %s\n", err.what());
    return kExitInput;
  } catch (const swarmopt::DimensionError& err) {
    std::fprintf(stderr, "input mismatch: %s\n", err.what());
    return kExitInput;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "internal error: %s\n", err.what());
    return kExitInternal;
  }
  return kExitInternal;
}
