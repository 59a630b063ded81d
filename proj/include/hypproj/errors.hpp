#pragma once

#include <stdexcept>
#include <string>

namespace hypproj {

/// Bad arguments: dimension mismatch, out-of-range parameter, degenerate input.
/// The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to meet its contract (non-convergence,
/// too few usable scales). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypproj
