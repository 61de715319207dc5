#pragma once

#include <span>
#include <vector>

namespace slitmap {

struct Extrapolated {
  double limit = 0.0;
  double error_estimate = 0.0;  ///< magnitude of the last increment
};

/// Polynomial (Richardson/Neville) extrapolation of v(eps) to eps -> 0.
///
/// `eps` must be strictly decreasing and positive.  `order` caps the number of
/// eliminations: order 1 assumes v = L + c*eps and removes the linear term
/// along the schedule, order eps.size()-1 is full polynomial extrapolation.
/// The error estimate is the last increment of the tableau.
Extrapolated extrapolate_to_zero(std::span<const double> eps,
                                 std::span<const double> values,
                                 int order = 1);

/// Shared default schedule for boundary-limit evaluations: {1e-2, 5e-3, 2.5e-3}.
std::vector<double> default_eps_schedule();

/// Geometric schedule eps0, eps0/2, ..., n entries.
std::vector<double> geometric_eps_schedule(double eps0, int n);

}  // namespace slitmap
