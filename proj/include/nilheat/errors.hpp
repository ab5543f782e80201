#pragma once

#include <stdexcept>
#include <string>

namespace nilheat {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad argument values (empty lists, out-of-range indices, malformed permutations).
struct ArgumentError : Error {
  using Error::Error;
};

/// Vector/matrix does not conform to the algebra it is used with.
struct ConformanceError : Error {
  using Error::Error;
};

/// Constructor input violates a required structural property.
struct ValidationError : Error {
  using Error::Error;
};

/// Requested construction is infeasible (e.g. dim too small for the step).
struct ConstructionError : Error {
  using Error::Error;
};

/// Linearly dependent input where independence is required.
struct RankError : Error {
  using Error::Error;
};

/// A memory/size guard tripped.
struct ResourceError : Error {
  using Error::Error;
};

/// Numerical failure (non-converged eigensolver, ill-conditioned solve).
struct NumericError : Error {
  using Error::Error;
};

}  // namespace nilheat
