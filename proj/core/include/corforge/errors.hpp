#pragma once

#include <stdexcept>
#include <string>

namespace corforge {

/// Base class of every corforge error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The adjoint series ad_A^k(B) did not vanish within the depth cap; the
/// factor/operand pair lies outside the guaranteed-terminating class.
struct NonTerminatingSeries : Error {
  using Error::Error;
};

/// A matrix exponential left the representable floating-point range.
struct Overflow : Error {
  using Error::Error;
};

/// A Dyson factor could not be evaluated or inverted at the requested time.
struct SingularFactor : Error {
  using Error::Error;
};

/// An eigensolver failed to converge.
struct EigensolverFailure : Error {
  using Error::Error;
};

/// The adaptive integrator could not reach the requested tolerance.
struct StepRejection : Error {
  using Error::Error;
};

/// A physical overlap was too close to zero to normalize by.
struct ZeroNorm : Error {
  using Error::Error;
};

/// A scenario parameter left its mathematical domain (e.g. sigma(t) <= 0).
struct DomainError : Error {
  using Error::Error;
};

/// Malformed scenario file or coefficient expression.
struct ParseError : Error {
  using Error::Error;
};

/// Structurally valid input that violates a scenario invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// Filesystem failure while writing artifacts.
struct IoError : Error {
  using Error::Error;
};

}  // namespace corforge
