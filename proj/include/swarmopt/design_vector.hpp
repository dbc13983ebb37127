#pragma once

#include <vector>

#include <Eigen/Dense>

#include "swarmopt/weight_matrix.hpp"

namespace swarmopt {

// Flat decision vector for the joint weight/heading problem: the full 4x4
// weight matrix row-major (w11..w14, w21.., .., w41..w44) followed by the
// leader headings for t = 1..T in radians. The fourth weight row rides along
// for symmetry with the published formulation but never influences the
// dynamics; its row-sum constraint keeps it pinned.
struct DesignLayout {
  int steps = 0;

  static constexpr int kAgents = 4;
  static constexpr int kWeightCount = kAgents * kAgents;

  int size() const { return kWeightCount + steps; }
  int weight_index(int row, int col) const { return row * kAgents + col; }
  int heading_index(int t) const { return kWeightCount + (t - 1); }  // t in 1..T
};

struct PackedDesign {
  WeightMatrix coop;                    // 3x4 cooperative rows
  Eigen::Vector4d leader_row;           // inert fourth row
  std::vector<double> leader_headings;  // radians, t = 1..T
};

Eigen::VectorXd pack(const PackedDesign& design, const DesignLayout& layout);

// Exact inverse of pack: every entry copied bit-for-bit, no validation.
PackedDesign unpack(const Eigen::VectorXd& flat, const DesignLayout& layout,
                    double weight_lower_bound);

}  // namespace swarmopt
