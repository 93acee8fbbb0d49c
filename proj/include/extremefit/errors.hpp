#pragma once

#include <stdexcept>
#include <string>

namespace extremefit {

// Base of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (scale <= 0,
// probability outside (0,1), length mismatch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid user configuration: bad flags, malformed input files, invalid model spec.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure could not proceed: no finite starting point,
// degenerate sample, non-finite function evaluation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace extremefit
