#pragma once

#include <stdexcept>
#include <string>

namespace areal {

// Malformed input files or configuration. CLI exit code 2.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated numeric precondition: density outside [0, k_jam], zero speed
// where a positive one is required, degenerate regions, unsupported FD
// family. CLI exit code 4.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Time step too large for the discretization. CLI exit code 4.
struct CflError : DomainError {
  using DomainError::DomainError;
};

// An iterative method failed to converge or exceeded its work cap.
// CLI exit code 3.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace areal
