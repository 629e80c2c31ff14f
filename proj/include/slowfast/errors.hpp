#pragma once

#include <stdexcept>
#include <string>

namespace slowfast {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A state left the system's domain box; message names the offending coordinate.
class DomainError : public Error {
public:
  DomainError(const std::string& coord, double value, const std::string& msg)
      : Error(msg), coordinate(coord), offending_value(value) {}
  std::string coordinate;
  double offending_value;
};

class UnknownSystemError : public Error {
public:
  using Error::Error;
};

// g(.,0) vanishes on a subinterval, or a balance point is tangential.
class DegenerateSystemError : public Error {
public:
  using Error::Error;
};

// Generic precondition violation (bad argument ranges, wrong fast exponent, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

class MaxStepsExceeded : public Error {
public:
  using Error::Error;
};

class StepUnderflow : public Error {
public:
  using Error::Error;
};

class EventNotFound : public Error {
public:
  using Error::Error;
};

// Trajectory left the domain box before the requested event fired.
class EscapeError : public Error {
public:
  EscapeError(const std::string& face_, double t_, const std::string& msg)
      : Error(msg), face(face_), t(t_) {}
  std::string face;  // "x_min", "x_max" or "z_max"
  double t;
};

// The cumulative entry-exit integral never balances inside the domain.
class ExitNotFound : public Error {
public:
  ExitNotFound(double integral_min_, const std::string& msg)
      : Error(msg), integral_min(integral_min_) {}
  double integral_min;  // most negative value reached by the cumulative integral
};

// Requested section parameter exceeds what the chart can reach.
class ChartOverflowError : public Error {
public:
  ChartOverflowError(double attainable_, const std::string& msg)
      : Error(msg), attainable(attainable_) {}
  double attainable;
};

class ChartBoundaryError : public Error {
public:
  using Error::Error;
};

// z*E drifted away from eps beyond the allowed relative error.
class ConservationError : public Error {
public:
  using Error::Error;
};

class FitError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace slowfast
