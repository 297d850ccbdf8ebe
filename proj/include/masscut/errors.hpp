#pragma once

#include <stdexcept>
#include <string>

namespace masscut {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A hyperplane (nearly) parallel to the base slice has no restriction.
class DegenerateRestriction : public Error {
 public:
  using Error::Error;
};

/// Exact-mode mass split met points lying on the cutting plane.
class BoundaryPoints : public Error {
 public:
  using Error::Error;
};

/// One side of a mass split carries no weight.
class EmptyHalf : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class NoBoundAvailable : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message carries line/field context.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed file whose contents violate a type invariant.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace masscut
