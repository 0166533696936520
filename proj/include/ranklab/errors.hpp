#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ranklab {

// Contract violations on inputs (bad flags, malformed rows, out-of-domain
// arguments). The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failures while computing (quadrature did not converge, output cap hit).
// The CLI maps these to exit code 3.
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an enumeration or simulation would exceed the caller's cap.
// Carries the exact count so the caller can re-issue with a larger cap.
class CapExceededError : public ComputeError {
 public:
  CapExceededError(const std::string& what, std::int64_t exact_count)
      : ComputeError(what), exact_count(exact_count) {}
  std::int64_t exact_count;
};

}  // namespace ranklab
