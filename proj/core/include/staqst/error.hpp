#pragma once

#include <stdexcept>
#include <string>

namespace staqst {

/// Invalid argument or parameter outside a documented domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integrator or numerical-consistency failure (norm/trace drift,
/// positivity violation, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace staqst
