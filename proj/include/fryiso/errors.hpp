#pragma once

#include <stdexcept>
#include <string>

namespace fryiso {

/// Argument outside the mathematical domain of an operation (e.g. a <= 0 for
/// the compression matrix, p >= 1 for a quantile).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid or inconsistent configuration (model grid, test settings, CLI flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (CSV rows, points outside the window).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulator could not produce a realization (e.g. infeasible hard-core packing).
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fryiso
