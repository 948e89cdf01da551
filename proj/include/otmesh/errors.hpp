#pragma once

#include <stdexcept>
#include <string>

namespace otmesh {

/// Invalid scenario/solver configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: divergence, tangling, convexity loss (CLI exit code 2).
class SolverError : public std::runtime_error {
  public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// File-system / serialization failure (CLI exit code 3).
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace otmesh
