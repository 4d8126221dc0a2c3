#pragma once

#include <stdexcept>
#include <string>

namespace ohmic {

// Base of every error raised by the library. Callers that only care about
// "did the numerics fail" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (poles, negative
// inputs, invariants of a domain type).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid combination of otherwise valid arguments, e.g. a zero-temperature
// closed form requested at finite temperature.
class UsageError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

// A quantity that only diverges formally (e.g. Fisher information at zero
// decoherence with nonzero sensitivity).
class SingularLimitError : public Error {
 public:
  using Error::Error;
};

class NoOptimumError : public Error {
 public:
  using Error::Error;
};

class BracketError : public Error {
 public:
  BracketError(const std::string& what, double value_lo, double value_hi)
      : Error(what), value_lo_(value_lo), value_hi_(value_hi) {}

  double value_lo() const noexcept { return value_lo_; }
  double value_hi() const noexcept { return value_hi_; }

 private:
  double value_lo_;
  double value_hi_;
};

class AmbiguityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ohmic
