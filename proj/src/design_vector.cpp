#include "swarmopt/design_vector.hpp"

#include <string>

#include "swarmopt/errors.hpp"

namespace swarmopt {

Eigen::VectorXd pack(const PackedDesign& design, const DesignLayout& layout) {
  if (design.coop.rows.rows() != DesignLayout::kAgents - 1 ||
      design.coop.rows.cols() != DesignLayout::kAgents) {
    throw DimensionError("cooperative block must be 3 x 4");
  }
  if (static_cast<int>(design.leader_headings.size()) != layout.steps) {
    throw DimensionError("expected " + std::to_string(layout.steps) +
                         " leader headings, got " +
                         std::to_string(design.leader_headings.size()));
  }
  Eigen::VectorXd flat(layout.size());
  for (int i = 0; i < DesignLayout::kAgents - 1; ++i) {
    for (int j = 0; j < DesignLayout::kAgents; ++j) {
      flat(layout.weight_index(i, j)) = design.coop.rows(i, j);
    }
  }
  for (int j = 0; j < DesignLayout::kAgents; ++j) {
    flat(layout.weight_index(DesignLayout::kAgents - 1, j)) = design.leader_row(j);
  }
  for (int t = 1; t <= layout.steps; ++t) {
    flat(layout.heading_index(t)) = design.leader_headings[static_cast<size_t>(t - 1)];
  }
  return flat;
}

PackedDesign unpack(const Eigen::VectorXd& flat, const DesignLayout& layout,
                    double weight_lower_bound) {
  if (flat.size() != layout.size()) {
    throw DimensionError("design vector has size " + std::to_string(flat.size()) +
                         ", expected " + std::to_string(layout.size()));
  }
  PackedDesign design;
  design.coop.rows.resize(DesignLayout::kAgents - 1, DesignLayout::kAgents);
  design.coop.lower_bound = weight_lower_bound;
  for (int i = 0; i < DesignLayout::kAgents - 1; ++i) {
    for (int j = 0; j < DesignLayout::kAgents; ++j) {
      design.coop.rows(i, j) = flat(layout.weight_index(i, j));
    }
  }
  for (int j = 0; j < DesignLayout::kAgents; ++j) {
    design.leader_row(j) = flat(layout.weight_index(DesignLayout::kAgents - 1, j));
  }
  design.leader_headings.resize(static_cast<size_t>(layout.steps));
  for (int t = 1; t <= layout.steps; ++t) {
    design.leader_headings[static_cast<size_t>(t - 1)] = flat(layout.heading_index(t));
  }
  return design;
}

}  // namespace swarmopt
