#pragma once
#include <stdexcept>
#include <string>

namespace mlsc {

// invalid configuration / bad arguments -> CLI exit code 2
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// numerical preconditions not met (unresolved grid, tail mass, degenerate
// input, ...) -> CLI exit code 3
struct precondition_error : std::runtime_error {
  explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mlsc
