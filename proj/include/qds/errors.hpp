#pragma once

#include <stdexcept>
#include <string>

namespace qds {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed problem or report document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Mutually inconsistent shapes (matrix sizes, vector lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Values outside the admissible domain (beta <= 0, asymmetry beyond tolerance).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input matrix expected symmetric but is not.
class AsymmetricInput : public Error {
 public:
  using Error::Error;
};

/// f is not in the column space of a singular G(sigma).
class InfeasibleDual : public Error {
 public:
  using Error::Error;
};

/// A stated precondition of an operation does not hold.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// Trailing block of a Schur-complement test is not positive definite.
class SchurPrecondition : public PreconditionViolated {
 public:
  using PreconditionViolated::PreconditionViolated;
};

/// rank(F(x)) is too small for the requested subspace certificate.
class RankDeficientF : public Error {
 public:
  using Error::Error;
};

/// Non-degeneracy assumption fails within tolerance.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Exhaustive scan requested on a dimension that is too large.
class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace qds
