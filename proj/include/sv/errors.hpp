#pragma once

#include <stdexcept>
#include <string>

namespace sv {

// Unreadable or malformed input data (files, price series, chain tables).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerically degenerate state: zero-residual conditionals, zero-variance
// series. Signalled instead of dividing through.
struct DegeneracyError : std::runtime_error {
  explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sv
