#pragma once

#include <stdexcept>
#include <string>

namespace minvar {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A differentiable primitive was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// det g fell below the rank tolerance.
class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

class NotSpherical : public Error {
 public:
  using Error::Error;
};

/// Malformed family description or configuration.
class SpecError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ChartDomainError : public Error {
 public:
  using Error::Error;
};

class BranchLocusError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not produce an admissible point.
class SamplingExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace minvar
