#pragma once

#include <stdexcept>
#include <string>

namespace wlab {

// User-facing configuration problems (bad N, bad speed sign, bad config file).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Programming-contract breaches (mismatched grids, wrong family).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Iterative solver gave up (Newton stagnation, continuation stall).
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wlab
