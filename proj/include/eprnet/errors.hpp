#pragma once

#include <stdexcept>
#include <string>

namespace eprnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: CLI flags, config files, out-of-range arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A data structure violates one of its documented invariants.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Numerical integration failed to reach the requested tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

// No valid route (or route pair) exists for a request.
class RoutingError : public Error {
 public:
  using Error::Error;
};

}  // namespace eprnet
