#pragma once

#include <stdexcept>
#include <string>

namespace pwsim {

/// Base class for all errors raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the region where the steady state exists (gamma_i*gamma_s <= 4*delta^2).
class StabilityError : public Error {
 public:
  using Error::Error;
};

/// Integrator failure or a numerical invariant violated beyond tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Quantity is mathematically undefined for the given input (e.g. no emission at all).
class UndefinedStateError : public Error {
 public:
  using Error::Error;
};

/// Pump geometry violates in-plane momentum conservation.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pwsim
