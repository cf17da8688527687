#pragma once

#include <stdexcept>
#include <string>

namespace ouestim {

// Parameter outside the mathematical domain of an operation (negative time,
// H outside (0,1), theta <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller asked for something the configuration does not allow (grid too
// large for the dense sampler, quadrature too coarse, bad flag value).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not complete (Cholesky failed after jitter).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data is malformed (non-finite path values, empty samples).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result would not be representable in double precision.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

}  // namespace ouestim
