#pragma once

#include <stdexcept>
#include <string>

namespace billiards {

// Base class for all library failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A point handed to a surface query does not lie on the body within tolerance.
struct OffSurfaceError : Error {
  using Error::Error;
};

// An iterative procedure (projection, root finding, refinement) ran out of
// iterations before reaching its tolerance.
struct NoConvergenceError : Error {
  using Error::Error;
};

// A configuration violates admissibility (consecutive points coincide).
struct InadmissibleError : Error {
  using Error::Error;
};

// Operation applied to the wrong configuration flavor.
struct WrongKindError : Error {
  using Error::Error;
};

// Argument outside the documented domain.
struct BadInputError : Error {
  using Error::Error;
};

// Bound clause requested for a parameter combination it does not cover.
struct BadClauseError : Error {
  using Error::Error;
};

// classify() called at a configuration whose gradient is not small.
struct NotCriticalError : Error {
  using Error::Error;
};

// Combination the theory behind the module does not state.
struct UnsupportedError : Error {
  using Error::Error;
};

// Malformed body/experiment definition file.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace billiards
