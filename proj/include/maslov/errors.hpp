#pragma once

#include <stdexcept>
#include <string>

namespace maslov {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed matrix document, vector literal, or option value.
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Shape mismatch or unsupported dimension.
struct DimensionError : Error {
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// Input vector is zero or its entries share a common factor.
struct NotPrimitiveError : Error {
  explicit NotPrimitiveError(const std::string& what) : Error(what) {}
};

// Matrix expected to be unimodular (det = +1, or det = ±1 where stated).
struct NotUnimodularError : Error {
  explicit NotUnimodularError(const std::string& what) : Error(what) {}
};

// Matrix has no kernel vector / no eigenvector for the requested eigenvalue.
struct NoKernelError : Error {
  explicit NoKernelError(const std::string& what) : Error(what) {}
};

// Eigenvalue multiplicities do not match the operation's requirement.
struct MultiplicityError : Error {
  explicit MultiplicityError(const std::string& what) : Error(what) {}
};

// Value outside the operation's mathematical domain (non-regular value,
// energy below the effective-potential minimum, critical fiber, ...).
struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Adaptive integration failed (step-size underflow, time cap exceeded).
struct IntegrationError : Error {
  explicit IntegrationError(const std::string& what) : Error(what) {}
};

// A quantity that must round to an integer fell outside the accepted
// distance from the nearest integer, or a frame became degenerate.
struct ResolutionError : Error {
  explicit ResolutionError(const std::string& what) : Error(what) {}
};

// Loop sample touched a near-critical torus; carries the failing s.
struct NearCriticalError : Error {
  double s;
  NearCriticalError(const std::string& what, double failing_s)
      : Error(what), s(failing_s) {}
};

}  // namespace maslov
