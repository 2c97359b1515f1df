#pragma once

#include <stdexcept>
#include <string>

namespace jitterlab {

// Thrown when a request would exceed a configured combinatorial limit
// (the subset-sum table grows as 2^n).
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when the estimated numerical error of a result exceeds its
// accuracy contract, or a numeric scheme fails to converge within its
// evaluation budget. Results are never silently degraded.
class precision_error : public std::runtime_error {
 public:
  explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace jitterlab
