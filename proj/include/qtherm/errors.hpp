#pragma once

#include <stdexcept>
#include <string>

namespace qtherm {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (e.g. log of a
/// matrix with a genuinely negative eigenvalue).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class NonPositiveTemperature : public Error {
 public:
  using Error::Error;
};

class BadSplit : public Error {
 public:
  using Error::Error;
};

class BadDistribution : public Error {
 public:
  using Error::Error;
};

class NonPositiveHotHeat : public Error {
 public:
  using Error::Error;
};

/// Integrator refused a step, e.g. because the state left the admissible
/// set. Carries the time at which the step failed.
class StepRejected : public Error {
 public:
  StepRejected(const std::string& what, double t) : Error(what), time(t) {}
  double time;
};

/// Invalid run configuration; the message names the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qtherm
