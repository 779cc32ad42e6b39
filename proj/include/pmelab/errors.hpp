#pragma once

#include <stdexcept>
#include <string>

namespace pmelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad weights, out-of-range parameters, bad files.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// A field value outside the domain of an operator (e.g. u <= 0 where a
/// negative power is taken).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Raised by distance queries on vertex pairs that are not connected.
class NoPathError : public Error
{
public:
  using Error::Error;
};

/// An operation was called on input that violates its stated precondition.
class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// Harnack operations require lambda < 1; the lambda = 1 case carries no
/// gradient term and is rejected.
class DegenerateHarnackError : public ValidationError
{
public:
  using ValidationError::ValidationError;
};

/// The adaptive integrator could not make progress (step size underflow).
class StiffnessError : public Error
{
public:
  StiffnessError(const std::string& what, double failure_time)
    : Error(what), failure_time_(failure_time)
  {
  }

  double failure_time() const noexcept { return failure_time_; }

private:
  double failure_time_;
};

} // namespace pmelab
