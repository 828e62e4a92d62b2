#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace icobr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (negative SNR, NaN, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A scenario or config field failed validation. `field()` names the offender.
class ValidationError : public Error {
public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Outer bound requested outside a12 <= 1, c1 >= c2.
class RegimeError : public Error {
public:
  using Error::Error;
};

class InfeasibleError : public Error {
public:
  using Error::Error;
};

class UnboundedError : public Error {
public:
  using Error::Error;
};

/// A closed-form capacity expression was requested where its conditions fail.
class PreconditionError : public Error {
public:
  PreconditionError(const std::string& what, std::vector<std::string> failed)
      : Error(what), failed_(std::move(failed)) {}

  const std::vector<std::string>& failed_conditions() const noexcept { return failed_; }

private:
  std::vector<std::string> failed_;
};

}  // namespace icobr
