#pragma once

#include <stdexcept>
#include <string>

namespace trust {

// Caller passed an argument outside the function's domain (bad probability,
// non-positive degrees of freedom, malformed dimensions).
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter point lies outside the model's valid set. MCMC proposals hit
// these routinely, so they must be catchable and rejectable, never fatal.
class constraint_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix factorization failed (non positive definite input).
class decomposition_error : public constraint_error {
 public:
  using constraint_error::constraint_error;
};

// Numerical procedure broke down (quadrature, table construction, root find).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user-facing input: CSV files, CLI configuration.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trust
