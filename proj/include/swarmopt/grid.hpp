#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "swarmopt/errors.hpp"

namespace swarmopt {

// Square exploration grid of cells_per_side x cells_per_side cells. Cells are
// half-open: cell (p, q) covers [origin + p*h, origin + (p+1)*h) on each axis,
// so every point belongs to at most one cell.
struct GridSpec {
  double cell_size = 1.0;
  std::array<double, 2> origin{0.0, 0.0};  // lower-left corner of cell (0, 0)
  int cells_per_side = 1;

  void validate() const {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
      throw ConfigError("grid.cell_size must be positive, got " +
                        std::to_string(cell_size));
    }
    if (cells_per_side < 1) {
      throw ConfigError("grid.cells must be at least 1, got " +
                        std::to_string(cells_per_side));
    }
    if (!std::isfinite(origin[0]) || !std::isfinite(origin[1])) {
      throw ConfigError("grid.origin must be finite");
    }
  }

  std::optional<std::array<int, 2>> cell_of(double px, double py) const {
    const int p = static_cast<int>(std::floor((px - origin[0]) / cell_size));
    const int q = static_cast<int>(std::floor((py - origin[1]) / cell_size));
    if (p < 0 || q < 0 || p >= cells_per_side || q >= cells_per_side) {
      return std::nullopt;
    }
    return std::array<int, 2>{p, q};
  }

  std::array<double, 2> cell_lower(int p, int q) const {
    return {origin[0] + p * cell_size, origin[1] + q * cell_size};
  }
};

}  // namespace swarmopt
