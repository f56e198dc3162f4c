#pragma once
#include <stdexcept>
#include <string>

namespace mvgb {

// Bad inputs: unknown axis, malformed file, out-of-range parameter.
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter regime excluded by a bound's premises (fast-rate condition,
// vacuous gamma, lambda far from 0). The CLI maps this to exit code 3.
class RegimeError : public std::runtime_error {
 public:
  explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mvgb
