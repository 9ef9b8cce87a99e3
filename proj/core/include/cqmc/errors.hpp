#pragma once

#include <stdexcept>
#include <string>

namespace cqmc {

/// Base of every error raised by the library. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a map (e.g. g_theta at t = theta^k).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid model or algorithm parameter (k < 2, theta <= 1, nonpositive input).
class ParamError : public Error {
 public:
  using Error::Error;
};

/// Requested object does not exist in the current temperature regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration would exceed the configured site cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Observable touches sites outside the finite volume.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// Invariant line or fixed point index unavailable for this theta.
class IndexError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqmc
