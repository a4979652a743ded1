#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geotransfer {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A position at (or numerically at) the attracting centre.
class SingularInputError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (e.g. E >= 0 for a transfer ellipse).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not meet its tolerance.
class StepFailureError : public Error {
 public:
  using Error::Error;
};

/// 2(E - V) <= 0 at some evaluated point: no geodesic exists there at this energy.
class HillRegionError : public Error {
 public:
  HillRegionError(const std::string& what, std::ptrdiff_t node = -1)
      : Error(what), node_(node) {}
  /// Offending curve node, or -1 when the check was not on a curve.
  std::ptrdiff_t node() const noexcept { return node_; }

 private:
  std::ptrdiff_t node_;
};

/// Semi-major axis below a_min for the endpoint pair.
class InfeasibleSmaError : public Error {
 public:
  using Error::Error;
};

/// p0, pf and the origin are collinear so the transfer plane is undefined.
class DegeneratePlaneError : public Error {
 public:
  using Error::Error;
};

class PointNotOnEllipseError : public Error {
 public:
  using Error::Error;
};

class TangentDegeneracyError : public Error {
 public:
  using Error::Error;
};

/// No feasible candidate survived the coarse search.
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario or report input.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace geotransfer
