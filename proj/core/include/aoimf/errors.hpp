#pragma once

#include <stdexcept>
#include <string>

namespace aoimf {

/// Invalid parameter values, malformed configuration.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// File not found, unreadable, or does not match the expected schema.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver exhausted its iteration budget.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual(last_residual) {}
  double last_residual;
};

}  // namespace aoimf
