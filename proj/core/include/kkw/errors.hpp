#pragma once

#include <stdexcept>
#include <string>

namespace kkw {

// Index out of range, invalid grade, non-decaying symbol, ...
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A derivative of order three or higher was requested.
class UnsupportedOrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested computation is not implemented for this perturbation class.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or malformed fixture / catalog data.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical oracle failures: truncation, ill-conditioned fits, bad windows.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kkw
