#pragma once

#include <stdexcept>
#include <string>

namespace vdsim {

// Base for every error the library raises on bad input or an unsatisfiable
// request. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Fewer cause-survivors than the protocol can consume.
class PoolExhausted : public Error {
 public:
  using Error::Error;
};

class SheetError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

// State-space budget exceeded in the equilibrium solver.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An internal invariant broke. Never expected on valid input; exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace vdsim
