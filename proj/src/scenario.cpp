#include "swarmopt/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "swarmopt/angles.hpp"
#include "swarmopt/errors.hpp"

namespace swarmopt {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || trim(end).size() != 0 || !std::isfinite(x)) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return x;
}

long long parse_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || trim(end).size() != 0) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
  return x;
}

std::array<double, 2> parse_pair(const std::string& key, const std::string& value) {
  std::string v = value;
  for (char& ch : v) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(v);
  std::array<double, 2> out{};
  std::string extra;
  if (!(in >> out[0] >> out[1]) || (in >> extra)) {
    throw ConfigError(key + ": expected two numbers, got '" + value + "'");
  }
  return out;
}

std::array<double, 4> parse_quad(const std::string& key, const std::string& value) {
  std::string v = value;
  for (char& ch : v) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(v);
  std::array<double, 4> out{};
  std::string extra;
  if (!(in >> out[0] >> out[1] >> out[2] >> out[3]) || (in >> extra)) {
    throw ConfigError(key + ": expected four numbers, got '" + value + "'");
  }
  return out;
}

void set_key(ScenarioConfig& cfg, const std::string& section,
             const std::string& key, const std::string& value) {
  const std::string full = section.empty() ? key : section + "." + key;
  if (section.empty()) {
    if (key == "name") {
      cfg.name = trim(value);
    } else if (key == "steps") {
      cfg.steps = static_cast<int>(parse_int(full, value));
    } else if (key == "a1") {
      cfg.objective_weights.a1 = parse_double(full, value);
    } else if (key == "a2") {
      cfg.objective_weights.a2 = parse_double(full, value);
    } else if (key == "min_tol") {
      cfg.min_tol = parse_double(full, value);
    } else if (key == "max_tol") {
      cfg.max_tol = parse_double(full, value);
    } else if (key == "target_x") {
      cfg.target[0] = parse_double(full, value);
    } else if (key == "target_y") {
      cfg.target[1] = parse_double(full, value);
    } else if (key == "step_length") {
      cfg.step_length = parse_double(full, value);
    } else if (key == "weight_lower_bound") {
      cfg.weight_lower_bound = parse_double(full, value);
    } else if (key == "epsilon_guard") {
      cfg.epsilon_guard = parse_double(full, value);
    } else if (key == "area_score") {
      const std::string v = trim(value);
      if (v == "reciprocal_gap") {
        cfg.area_score_form = AreaScoreForm::reciprocal_gap;
      } else if (v == "ratio") {
        cfg.area_score_form = AreaScoreForm::ratio;
      } else {
        throw ConfigError("area_score: expected reciprocal_gap or ratio, got '" + v + "'");
      }
    } else if (key == "consensus_utopia") {
      const std::string v = trim(value);
      if (v == "solver") {
        cfg.consensus_utopia = ConsensusUtopiaMode::solver;
      } else if (v == "metropolis") {
        cfg.consensus_utopia = ConsensusUtopiaMode::metropolis;
      } else {
        throw ConfigError("consensus_utopia: expected solver or metropolis, got '" + v + "'");
      }
    } else {
      throw ConfigError("unknown key '" + full + "'");
    }
  } else if (section == "formation") {
    if (key == "leader") {
      cfg.formation.positions[3] = parse_pair(full, value);
    } else if (key == "agent1") {
      cfg.formation.positions[0] = parse_pair(full, value);
    } else if (key == "agent2") {
      cfg.formation.positions[1] = parse_pair(full, value);
    } else if (key == "agent3") {
      cfg.formation.positions[2] = parse_pair(full, value);
    } else if (key == "headings_deg") {
      cfg.formation.headings_deg = parse_quad(full, value);
    } else {
      throw ConfigError("unknown key '" + full + "'");
    }
  } else if (section == "grid") {
    if (key == "cell_size") {
      cfg.grid_cell_size = parse_double(full, value);
    } else if (key == "cells") {
      cfg.grid_cells = static_cast<int>(parse_int(full, value));
    } else if (key == "origin") {
      cfg.grid_origin = parse_pair(full, value);
    } else {
      throw ConfigError("unknown key '" + full + "'");
    }
  } else if (section == "smoothing") {
    if (key == "beta") {
      cfg.smoothing_beta = parse_double(full, value);
    } else if (key == "sigma") {
      cfg.smoothing_sigma = parse_double(full, value);
    } else {
      throw ConfigError("unknown key '" + full + "'");
    }
  } else if (section == "solver") {
    if (key == "kkt_tol") {
      cfg.solver.kkt_tol = parse_double(full, value);
    } else if (key == "step_tol") {
      cfg.solver.step_tol = parse_double(full, value);
    } else if (key == "max_iters") {
      cfg.solver.max_iters = static_cast<int>(parse_int(full, value));
    } else if (key == "max_func_evals") {
      cfg.solver.max_func_evals = static_cast<int>(parse_int(full, value));
    } else if (key == "bfgs_damping") {
      cfg.solver.bfgs_damping = parse_double(full, value);
    } else if (key == "armijo_c1") {
      cfg.solver.armijo_c1 = parse_double(full, value);
    } else if (key == "backtrack_factor") {
      cfg.solver.backtrack_factor = parse_double(full, value);
    } else if (key == "multistart_count") {
      cfg.solver.multistart_count = static_cast<int>(parse_int(full, value));
    } else if (key == "seed") {
      cfg.solver.rng_seed = static_cast<unsigned long long>(parse_int(full, value));
    } else if (key == "fd_step") {
      cfg.solver.fd_step = parse_double(full, value);
    } else if (key == "eq_tol") {
      cfg.solver.eq_tol = parse_double(full, value);
    } else if (key == "ineq_tol") {
      cfg.solver.ineq_tol = parse_double(full, value);
    } else {
      throw ConfigError("unknown key '" + full + "'");
    }
  } else {
    throw ConfigError("unknown section '[" + section + "]'");
  }
}

}  // namespace

GridSpec ScenarioConfig::effective_grid() const {
  GridSpec grid;
  grid.cell_size = grid_cell_size.value_or(step_length);
  if (grid_cells.has_value()) {
    grid.cells_per_side = *grid_cells;
  } else {
    double max_offset = 0.0;
    for (int i = 0; i < 3; ++i) {
      max_offset = std::max(max_offset,
                            std::abs(formation.positions[i][0] - formation.positions[3][0]));
      max_offset = std::max(max_offset,
                            std::abs(formation.positions[i][1] - formation.positions[3][1]));
    }
    const double reach = steps * step_length + max_offset;
    const int half = static_cast<int>(std::ceil(reach / grid.cell_size)) + 2;
    grid.cells_per_side = 2 * half + 1;
  }
  if (grid_origin.has_value()) {
    grid.origin = *grid_origin;
  } else {
    const double span = grid.cells_per_side * grid.cell_size;
    grid.origin = {formation.positions[3][0] - span / 2.0,
                   formation.positions[3][1] - span / 2.0};
  }
  return grid;
}

SmoothingParams ScenarioConfig::effective_smoothing() const {
  const GridSpec grid = effective_grid();
  SmoothingParams smoothing;
  smoothing.bbox_temperature = smoothing_beta.value_or(100.0 / grid.cell_size);
  smoothing.coverage_width = smoothing_sigma.value_or(grid.cell_size / 10.0);
  smoothing.epsilon_guard = epsilon_guard;
  return smoothing;
}

SwarmState ScenarioConfig::initial_state() const {
  SwarmState state;
  state.t = 0;
  state.headings.resize(4);
  state.pos_x.resize(4);
  state.pos_y.resize(4);
  for (int i = 0; i < 4; ++i) {
    state.headings(i) = deg_to_rad(formation.headings_deg[i]);
    state.pos_x(i) = formation.positions[i][0];
    state.pos_y(i) = formation.positions[i][1];
  }
  return state;
}

void ScenarioConfig::validate() const {
  if (name.empty()) throw ConfigError("name must not be empty");
  if (steps < 1) throw ConfigError("steps must be at least 1");
  objective_weights.validate();
  if (!(min_tol > 0.0)) throw ConfigError("min_tol must be positive");
  if (!(max_tol > min_tol)) throw ConfigError("max_tol must exceed min_tol");
  if (!(step_length > 0.0)) throw ConfigError("step_length must be positive");
  if (!(weight_lower_bound >= 0.0) || !(weight_lower_bound <= 0.25)) {
    throw ConfigError(
        "weight_lower_bound must lie in [0, 0.25] so rows can still sum to 1");
  }
  if (!(epsilon_guard > 0.0)) throw ConfigError("epsilon_guard must be positive");
  for (int i = 0; i < 4; ++i) {
    if (!std::isfinite(formation.positions[i][0]) ||
        !std::isfinite(formation.positions[i][1]) ||
        !std::isfinite(formation.headings_deg[i])) {
      throw ConfigError("formation entries must be finite");
    }
  }
  const double dx = target[0] - formation.positions[3][0];
  const double dy = target[1] - formation.positions[3][1];
  const double dist = std::hypot(dx, dy);
  if (dist > steps * step_length + 1e-9) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "target is %.6g away from the leader start but only %.6g is "
                  "reachable in %d steps",
                  dist, steps * step_length, steps);
    throw ConfigError(buf);
  }
  effective_grid().validate();
  effective_smoothing().validate();
  solver.validate();
}

std::map<std::string, ScenarioConfig> builtin_scenarios() {
  std::map<std::string, ScenarioConfig> out;

  ScenarioConfig sim1;
  sim1.name = "sim1";
  sim1.steps = 20;
  sim1.objective_weights = {0.5, 0.5};
  sim1.min_tol = 0.2;
  sim1.max_tol = 5.0;
  sim1.target = {-3.0, 11.0};
  out["sim1"] = sim1;

  ScenarioConfig sim2;
  sim2.name = "sim2";
  sim2.steps = 30;
  sim2.objective_weights = {0.5, 0.5};
  sim2.min_tol = 0.1;
  sim2.max_tol = 5.0;
  sim2.target = {5.0, 24.0};
  out["sim2"] = sim2;

  ScenarioConfig sim3 = sim2;
  sim3.name = "sim3";
  sim3.objective_weights = {0.25, 0.75};
  out["sim3"] = sim3;

  return out;
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected key = value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    set_key(cfg, section, key, value);
  }
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open scenario file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

void apply_override(ScenarioConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' must look like key=value");
  }
  const std::string path = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    set_key(config, "", path, value);
  } else {
    set_key(config, path.substr(0, dot), path.substr(dot + 1), value);
  }
}

std::string serialize_scenario(const ScenarioConfig& config) {
  char buf[256];
  std::ostringstream out;
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "name = " << config.name << "\n";
  out << "steps = " << config.steps << "\n";
  out << "a1 = " << num(config.objective_weights.a1) << "\n";
  out << "a2 = " << num(config.objective_weights.a2) << "\n";
  out << "min_tol = " << num(config.min_tol) << "\n";
  out << "max_tol = " << num(config.max_tol) << "\n";
  out << "target_x = " << num(config.target[0]) << "\n";
  out << "target_y = " << num(config.target[1]) << "\n";
  out << "step_length = " << num(config.step_length) << "\n";
  out << "weight_lower_bound = " << num(config.weight_lower_bound) << "\n";
  out << "epsilon_guard = " << num(config.epsilon_guard) << "\n";
  out << "area_score = "
      << (config.area_score_form == AreaScoreForm::reciprocal_gap ? "reciprocal_gap"
                                                                  : "ratio")
      << "\n";
  out << "consensus_utopia = "
      << (config.consensus_utopia == ConsensusUtopiaMode::solver ? "solver"
                                                                 : "metropolis")
      << "\n";
  out << "\n[formation]\n";
  out << "agent1 = " << num(config.formation.positions[0][0]) << " "
      << num(config.formation.positions[0][1]) << "\n";
  out << "agent2 = " << num(config.formation.positions[1][0]) << " "
      << num(config.formation.positions[1][1]) << "\n";
  out << "agent3 = " << num(config.formation.positions[2][0]) << " "
      << num(config.formation.positions[2][1]) << "\n";
  out << "leader = " << num(config.formation.positions[3][0]) << " "
      << num(config.formation.positions[3][1]) << "\n";
  out << "headings_deg = " << num(config.formation.headings_deg[0]) << " "
      << num(config.formation.headings_deg[1]) << " "
      << num(config.formation.headings_deg[2]) << " "
      << num(config.formation.headings_deg[3]) << "\n";
  if (config.grid_cell_size || config.grid_cells || config.grid_origin) {
    out << "\n[grid]\n";
    if (config.grid_cell_size) out << "cell_size = " << num(*config.grid_cell_size) << "\n";
    if (config.grid_cells) out << "cells = " << *config.grid_cells << "\n";
    if (config.grid_origin) {
      out << "origin = " << num((*config.grid_origin)[0]) << " "
          << num((*config.grid_origin)[1]) << "\n";
    }
  }
  if (config.smoothing_beta || config.smoothing_sigma) {
    out << "\n[smoothing]\n";
    if (config.smoothing_beta) out << "beta = " << num(*config.smoothing_beta) << "\n";
    if (config.smoothing_sigma) out << "sigma = " << num(*config.smoothing_sigma) << "\n";
  }
  out << "\n[solver]\n";
  out << "kkt_tol = " << num(config.solver.kkt_tol) << "\n";
  out << "step_tol = " << num(config.solver.step_tol) << "\n";
  out << "max_iters = " << config.solver.max_iters << "\n";
  out << "max_func_evals = " << config.solver.max_func_evals << "\n";
  out << "bfgs_damping = " << num(config.solver.bfgs_damping) << "\n";
  out << "armijo_c1 = " << num(config.solver.armijo_c1) << "\n";
  out << "backtrack_factor = " << num(config.solver.backtrack_factor) << "\n";
  out << "multistart_count = " << config.solver.multistart_count << "\n";
  out << "seed = " << config.solver.rng_seed << "\n";
  out << "fd_step = " << num(config.solver.fd_step) << "\n";
  out << "eq_tol = " << num(config.solver.eq_tol) << "\n";
  out << "ineq_tol = " << num(config.solver.ineq_tol) << "\n";
  return out.str();
}

}  // namespace swarmopt
