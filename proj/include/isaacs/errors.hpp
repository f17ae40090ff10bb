#pragma once

#include <stdexcept>
#include <string>

namespace isaacs {

// Invalid input to an operation (bad shape, out-of-range argument, unknown
// family, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested time step violates the monotonicity bound of the explicit scheme.
class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mark sequence fails the uniform asymptotic density check.
class DensityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite intermediate values, or a state far outside the lattice.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isaacs
