#pragma once

#include <stdexcept>
#include <string>

namespace slitmap {

/// Numerical integration failed to reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative limit (extrapolation, horizon doubling, root bracketing) did not settle.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation point too close to the support or to a pole for the requested operation.
class ProximityError : public std::runtime_error {
 public:
  explicit ProximityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input data violates a structural precondition (mass, ordering, overlap, ...).
class StructureError : public std::invalid_argument {
 public:
  explicit StructureError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Point outside the domain of a conformal map or transform.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// Slit geometry invalid: self-intersection, vertex below the axis, base off the line.
class GeometryError : public std::invalid_argument {
 public:
  explicit GeometryError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// No decreasing welding homeomorphism is compatible with the (d, H) profile.
class NoWeldingError : public std::runtime_error {
 public:
  NoWeldingError(const std::string& msg, double where, double residual)
      : std::runtime_error(msg), location(where), residual(residual) {}
  double location;  ///< abscissa of the first mismatch
  double residual;  ///< |d(h(x))-d(x)| + |H(h(x))-H(x)| there
};

}  // namespace slitmap
