#pragma once

#include <stdexcept>
#include <string>

namespace rssiloc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Precondition violations: non-positive distances, M < 3, NaN inputs,
// blind node coincident with an anchor.
struct DomainError : Error {
  using Error::Error;
};

// Degenerate geometry discovered while solving: collinear anchors,
// rank-deficient normal equations, singular information matrix.
struct GeometryError : Error {
  using Error::Error;
};

// Covariance matrix S is nonzero but not positive definite.
struct WeightError : Error {
  using Error::Error;
};

// Config/observation file parse or validation failure.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rssiloc
