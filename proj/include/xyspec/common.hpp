#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace xyspec {

using Complex = std::complex<double>;

// Base class for everything this library throws, so the CLI can catch the
// whole family at one boundary.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error { using Error::Error; };
struct NonHermitianInput : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularShift : Error { using Error::Error; };
struct DegenerateParameters : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct MatchFailure : Error { using Error::Error; };
struct OverflowRisk : Error { using Error::Error; };
struct NonOrthogonalBasis : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };

}  // namespace xyspec
