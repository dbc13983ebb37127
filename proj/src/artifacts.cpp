#include "swarmopt/artifacts.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "swarmopt/angles.hpp"
#include "swarmopt/errors.hpp"

namespace swarmopt {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
  if (!out) {
    throw std::runtime_error("cannot write artifact '" + path + "'");
  }
  return out;
}

std::string format_fixed4(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

double parse_field(const std::string& path, int line_no, const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str()) {
    throw ConfigError(path + ":" + std::to_string(line_no) +
                      ": expected a number, got '" + field + "'");
  }
  return v;
}

}  // namespace

std::string format_full(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_headings_csv(const std::string& path, const SwarmTrajectory& traj) {
  std::ofstream out = open_for_write(path);
  out << "time,agent1_deg,agent2_deg,agent3_deg,leader_deg\n";
  for (int t = 0; t <= traj.steps(); ++t) {
    const SwarmState& s = traj.at(t);
    out << t;
    for (int i = 0; i < s.agent_count(); ++i) {
      out << "," << format_full(rad_to_deg(s.headings(i)));
    }
    out << "\n";
  }
}

void write_path_csv(const std::string& path, const SwarmTrajectory& traj) {
  std::ofstream out = open_for_write(path);
  out << "time,x1,y1,x2,y2,x3,y3,x4,y4\n";
  for (int t = 0; t <= traj.steps(); ++t) {
    const SwarmState& s = traj.at(t);
    out << t;
    for (int i = 0; i < s.agent_count(); ++i) {
      out << "," << format_full(s.pos_x(i)) << "," << format_full(s.pos_y(i));
    }
    out << "\n";
  }
}

void write_weights_csv(const std::string& path, const WeightMatrix& weights) {
  std::ofstream out = open_for_write(path);
  out << "row,w1,w2,w3,w4\n";
  for (int i = 0; i < weights.rows.rows(); ++i) {
    out << "agent" << (i + 1);
    for (int j = 0; j < weights.rows.cols(); ++j) {
      out << "," << format_full(weights.rows(i, j));
    }
    out << "\n";
  }
}

void write_summary(const std::string& path, const RunOutcome& outcome) {
  std::ofstream out = open_for_write(path);
  const char* status = "utopia_failure";
  switch (outcome.status) {
    case RunStatus::ok: status = "ok"; break;
    case RunStatus::infeasible: status = "infeasible"; break;
    case RunStatus::budget_exhausted: status = "budget_exhausted"; break;
    case RunStatus::utopia_failure: status = "utopia_failure"; break;
  }
  out << "status = " << status << "\n";
  if (!outcome.bundle.has_value()) {
    out << "# " << outcome.message << "\n";
    return;
  }
  const ResultBundle& b = *outcome.bundle;
  out << "scenario = " << b.scenario.name << "\n";
  out << "steps = " << b.scenario.steps << "\n";
  out << "feasible = " << (b.feasibility.feasible ? "true" : "false") << "\n";
  out << "area_exact = " << format_full(b.breakdown.area_exact) << "\n";
  out << "area_smooth = " << format_full(b.breakdown.area_smooth) << "\n";
  out << "tracking_rss = " << format_full(b.breakdown.tracking_rss) << "\n";
  out << "phi1 = " << format_full(b.breakdown.phi1) << "\n";
  out << "phi2 = " << format_full(b.breakdown.phi2) << "\n";
  out << "objective = " << format_full(b.breakdown.scalar) << "\n";
  out << "objective_smooth = " << format_full(b.breakdown.scalar_smooth) << "\n";
  out << "utopia_area = " << format_full(b.utopia.points.area_best) << "\n";
  out << "utopia_rss = " << format_full(b.utopia.points.rss_best) << "\n";
  out << "utopia_rss_metropolis = " << format_full(b.utopia.metropolis_rss) << "\n";
  out << "solver_status = " << to_string(b.solve.status) << "\n";
  out << "start_index = " << b.solve.start_index << "\n";
  out << "starts_total = " << b.starts.all.size() << "\n";
  int feasible_starts = 0;
  for (const auto& rep : b.starts.all) {
    if (rep.feasible) ++feasible_starts;
  }
  out << "starts_feasible = " << feasible_starts << "\n";
  out << "func_evals = " << b.solve.func_evals << "\n";
  out << "iterations = " << b.solve.iterations << "\n";
  out << "kkt_residual = " << format_full(b.solve.kkt_residual) << "\n";
  out << "max_eq_violation = " << format_full(b.feasibility.max_equality_violation)
      << "\n";
  out << "max_ineq_violation = "
      << format_full(b.feasibility.max_inequality_violation) << "\n";
  out << "wall_seconds = " << format_full(b.wall_seconds) << "\n";

  out << "#\n# optimized weights (4 decimals):\n";
  for (int i = 0; i < b.weights.rows.rows(); ++i) {
    out << "#   agent" << (i + 1) << ":";
    for (int j = 0; j < b.weights.rows.cols(); ++j) {
      out << " " << format_fixed4(b.weights.rows(i, j));
    }
    out << "\n";
  }
  out << "#\n# headings per step (degrees, 4 decimals):\n";
  out << "#   t  agent1  agent2  agent3  leader\n";
  for (int t = 0; t <= b.trajectory.steps(); ++t) {
    const SwarmState& s = b.trajectory.at(t);
    out << "#   " << t;
    for (int i = 0; i < s.agent_count(); ++i) {
      out << "  " << format_fixed4(rad_to_deg(s.headings(i)));
    }
    out << "\n";
  }
  if (!b.feasibility.violations.empty()) {
    out << "#\n# violations:\n";
    for (const auto& line : b.feasibility.violations) {
      out << "#   " << line << "\n";
    }
  }
}

void write_artifacts(const std::string& out_dir, const RunOutcome& outcome) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_summary((dir / kSummaryFile).string(), outcome);
  if (!outcome.bundle.has_value()) return;
  const ResultBundle& b = *outcome.bundle;
  write_headings_csv((dir / kHeadingsFile).string(), b.trajectory);
  write_path_csv((dir / kPathFile).string(), b.trajectory);
  write_weights_csv((dir / kWeightsFile).string(), b.weights);
}

void write_trajectory_artifacts(const std::string& out_dir,
                                const SwarmTrajectory& traj) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_headings_csv((dir / kHeadingsFile).string(), traj);
  write_path_csv((dir / kPathFile).string(), traj);
}

Eigen::MatrixXd read_weights_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open weights file '" + path + "'");
  }
  Eigen::MatrixXd rows(3, 4);
  std::string line;
  int line_no = 0;
  int row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields = split_csv(line);
    if (!fields.empty() && fields.front() == "row") continue;  // header
    if (fields.empty()) continue;
    // Optional label column: drop a leading non-numeric field.
    char* end = nullptr;
    std::strtod(fields.front().c_str(), &end);
    size_t first = (end == fields.front().c_str()) ? 1 : 0;
    if (fields.size() - first != 4) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 4 weight entries per row");
    }
    if (row >= 3) {
      throw ConfigError(path + ": expected exactly 3 weight rows");
    }
    for (int j = 0; j < 4; ++j) {
      rows(row, j) = parse_field(path, line_no, fields[first + static_cast<size_t>(j)]);
    }
    ++row;
  }
  if (row != 3) {
    throw ConfigError(path + ": expected exactly 3 weight rows, found " +
                      std::to_string(row));
  }
  return rows;
}

std::vector<double> read_leader_headings_deg(const std::string& path, int steps) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open headings file '" + path + "'");
  }
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields = split_csv(line);
    if (fields.empty()) continue;
    if (!header_skipped) {
      char* end = nullptr;
      std::strtod(fields.front().c_str(), &end);
      if (end == fields.front().c_str()) {
        header_skipped = true;
        continue;  // header row
      }
      header_skipped = true;
    }
    values.push_back(parse_field(path, line_no, fields.back()));
  }
  if (static_cast<int>(values.size()) == steps + 1) {
    values.erase(values.begin());  // drop the initial state row
  } else if (static_cast<int>(values.size()) != steps) {
    throw ConfigError(path + ": expected " + std::to_string(steps) + " or " +
                      std::to_string(steps + 1) + " heading rows, found " +
                      std::to_string(values.size()));
  }
  return values;
}

}  // namespace swarmopt
