#pragma once

#include <stdexcept>
#include <string>

namespace lipmod {

// Base of every library failure so callers can catch a single type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched or empty dimensions.
struct DimensionError : Error {
  using Error::Error;
};

// Malformed or unsupported input (bad JSON, NaN coordinates, wrong variant).
struct InputError : Error {
  using Error::Error;
};

// A stated precondition of an operation does not hold.
struct PreconditionError : Error {
  using Error::Error;
};

// The constraint system has no solution.
struct InfeasibleError : Error {
  using Error::Error;
};

// An iterative solver gave up; best_bound carries the last certified value.
struct SolverError : Error {
  explicit SolverError(const std::string& what, double bound = 0.0)
      : Error(what), best_bound(bound) {}
  double best_bound;
};

}  // namespace lipmod
