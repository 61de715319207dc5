#include "slitmap/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "slitmap/errors.hpp"

namespace slitmap {

Extrapolated extrapolate_to_zero(std::span<const double> eps,
                                 std::span<const double> values,
                                 int order) {
  const std::size_t n = eps.size();
  if (n == 0 || values.size() != n)
    throw StructureError("extrapolate_to_zero: schedule and values must have equal, nonzero size");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(eps[i] > eps[i + 1]) || !(eps[i + 1] > 0.0))
      throw StructureError("extrapolate_to_zero: eps schedule must be strictly decreasing and positive");
  if (n == 1) return {values[0], std::abs(values[0])};

  const int max_order = std::clamp(order, 1, static_cast<int>(n) - 1);

  // Neville tableau for the interpolating polynomial in eps, evaluated at 0.
  // T[i] holds the column-j estimate ending at schedule entry i.
  std::vector<double> T(values.begin(), values.end());
  double last = T[n - 1];
  double prev_last = T[n - 2];
  for (int j = 1; j <= max_order; ++j) {
    for (std::size_t i = n - 1; i >= static_cast<std::size_t>(j); --i) {
      const double e_hi = eps[i - j];
      const double e_lo = eps[i];
      T[i] = (e_hi * T[i] - e_lo * T[i - 1]) / (e_hi - e_lo);
    }
    prev_last = (n - 1 >= static_cast<std::size_t>(j + 1)) ? T[n - 2] : last;
    last = T[n - 1];
  }
  return {last, std::abs(last - prev_last)};
}

std::vector<double> default_eps_schedule() { return {1e-2, 5e-3, 2.5e-3}; }

std::vector<double> geometric_eps_schedule(double eps0, int n) {
  std::vector<double> s;
  s.reserve(static_cast<std::size_t>(std::max(n, 0)));
  double e = eps0;
  for (int i = 0; i < n; ++i, e *= 0.5) s.push_back(e);
  return s;
}

}  // namespace slitmap
