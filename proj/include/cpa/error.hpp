#pragma once

#include <stdexcept>
#include <string>

namespace cpa {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Sizes or dimensions are inconsistent.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A positive-definite solve failed even after diagonal shifting.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine lost control (cycling, breakdown).
class NumericFailure : public Error {
 public:
  using Error::Error;
};

/// An optimization model has no feasible point.
class InfeasibleModel : public Error {
 public:
  using Error::Error;
};

/// Input file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpa
