#pragma once

#include <stdexcept>
#include <string>

namespace gcrp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (alpha, theta) outside the three admissible parameter regimes.
class InvalidRegime : public Error {
 public:
  using Error::Error;
};

/// A join move was requested for a size class with no parts.
class IllegalMove : public Error {
 public:
  using Error::Error;
};

/// Argument outside the validity domain of a formula or check.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration requested beyond the configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed simulation or ensemble configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gcrp
