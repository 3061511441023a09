#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wparab {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression source. `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// An argument left the natural domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical routine met a non-finite value or failed to produce one.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double location)
      : Error(what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

// Root finding without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

// A critical radius does not exist in the searched range.
class NotAttainedError : public Error {
 public:
  using Error::Error;
};

// The "for any t beyond t0" clause was violated by a sampled point.
class NonMonotoneTailError : public Error {
 public:
  NonMonotoneTailError(const std::string& what, double witness)
      : Error(what), witness_(witness) {}
  double witness() const noexcept { return witness_; }

 private:
  double witness_;
};

// The induced metric of an immersion is (numerically) singular.
class DegenerateMetricError : public Error {
 public:
  DegenerateMetricError(const std::string& what, std::vector<double> parameter)
      : Error(what), parameter_(std::move(parameter)) {}
  const std::vector<double>& parameter() const noexcept { return parameter_; }

 private:
  std::vector<double> parameter_;
};

// A test function for the index form does not vanish on the box boundary.
class SupportError : public Error {
 public:
  using Error::Error;
};

// Invalid inputs to a constructor or operation (bad sizes, ranges, invariants).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A comparison check was requested where the theorem does not apply.
class ComparisonRefused : public Error {
 public:
  using Error::Error;
};

}  // namespace wparab
