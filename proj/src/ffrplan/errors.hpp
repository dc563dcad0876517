#pragma once

#include <stdexcept>
#include <string>

namespace ffr {

// Invalid user-supplied configuration or operation parameter (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure: quadrature non-convergence, truncation shortfall, ... (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ffr
