#pragma once

#include <stdexcept>
#include <string>

namespace ssr {

// Error categories map onto the CLI exit-code contract:
//   input_error -> 2, physics_error -> 3, convergence_error -> 4.

class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

class physics_error : public std::runtime_error {
 public:
  explicit physics_error(const std::string& msg) : std::runtime_error(msg) {}
};

class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ssr
