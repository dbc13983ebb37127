#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swarmopt/runner.hpp"
#include "swarmopt/swarm_state.hpp"

namespace swarmopt {

// Artifact filenames inside an output directory.
inline constexpr const char* kHeadingsFile = "headings.csv";
inline constexpr const char* kPathFile = "path.csv";
inline constexpr const char* kWeightsFile = "weights.csv";
inline constexpr const char* kSummaryFile = "summary.txt";

// Numbers in machine-read artifacts print with %.17g so a reader recovers
// the exact double.
std::string format_full(double value);

void write_headings_csv(const std::string& path, const SwarmTrajectory& traj);
void write_path_csv(const std::string& path, const SwarmTrajectory& traj);
void write_weights_csv(const std::string& path, const WeightMatrix& weights);
void write_summary(const std::string& path, const RunOutcome& outcome);

// Writes all four artifacts into out_dir (created if missing).
void write_artifacts(const std::string& out_dir, const RunOutcome& outcome);

// Writes the two trajectory artifacts only (replay output).
void write_trajectory_artifacts(const std::string& out_dir,
                                const SwarmTrajectory& traj);

// Parses a weights artifact back into the 3 x 4 cooperative block. Accepts
// an optional leading label column; throws ConfigError on malformed input.
Eigen::MatrixXd read_weights_csv(const std::string& path);

// Extracts the leader heading schedule (degrees, t = 1..steps) from a
// headings artifact: last column, first data row dropped when the file
// carries the initial state too. Throws ConfigError unless the file has
// steps or steps + 1 data rows.
std::vector<double> read_leader_headings_deg(const std::string& path, int steps);

}  // namespace swarmopt
