#pragma once

#include <numbers>

namespace swarmopt {

// Headings are radians everywhere inside the library; degrees appear only at
// configuration and artifact boundaries.
constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace swarmopt
