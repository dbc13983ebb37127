#pragma once

#include <stdexcept>
#include <string>

namespace swarmopt {

// Weight matrix fails row-stochastic / bound / sparsity validation.
class InvalidWeightsError : public std::runtime_error {
 public:
  explicit InvalidWeightsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Agent counts or vector lengths disagree.
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numeric evaluation produced NaN/Inf or a linear solve broke down.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed scenario configuration or override.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace swarmopt
