#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "slitmap/branch.hpp"
#include "slitmap/errors.hpp"
#include "slitmap/extrapolate.hpp"

using namespace slitmap;
using cx = std::complex<double>;

TEST_CASE("extrapolation removes the linear error term") {
  // v(eps) = 3 + 2 eps + 5 eps^2
  std::vector<double> eps = {1e-2, 5e-3, 2.5e-3};
  std::vector<double> v;
  for (double e : eps) v.push_back(3.0 + 2.0 * e + 5.0 * e * e);
  const Extrapolated r1 = extrapolate_to_zero(eps, v, 1);
  // order 1 leaves the quadratic term ~ 5*eps2*eps3
  CHECK(std::abs(r1.limit - 3.0) < 1e-4);
  const Extrapolated r2 = extrapolate_to_zero(eps, v, 2);
  CHECK(std::abs(r2.limit - 3.0) < 1e-12);  // quadratic model is exact here
  CHECK(r1.error_estimate >= 0.0);
}

TEST_CASE("extrapolation input validation") {
  std::vector<double> bad_eps = {1e-2, 2e-2};
  std::vector<double> v = {1.0, 2.0};
  CHECK_THROWS_AS(extrapolate_to_zero(bad_eps, v, 1), StructureError);
  std::vector<double> eps = {1e-2};
  std::vector<double> v1 = {1.0, 2.0};
  CHECK_THROWS_AS(extrapolate_to_zero(eps, v1, 1), StructureError);
}

TEST_CASE("geometric schedule") {
  const auto s = geometric_eps_schedule(4e-2, 4);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == doctest::Approx(4e-2));
  CHECK(s[3] == doctest::Approx(5e-3));
}

TEST_CASE("half-plane square root branch") {
  // sqrt(z^2-4) ~ z at i*infinity
  const cx z(0.0, 50.0);
  const cx s = hp_sqrt(z * z - 4.0);
  CHECK(std::abs(s - z) < 0.05);

  // limits from the upper half-plane onto the two real rays
  const cx right = hp_sqrt(cx(3.0, 1e-12) * cx(3.0, 1e-12) - 4.0);
  CHECK(right.real() > 0.0);
  const cx left = hp_sqrt(cx(-3.0, 1e-12) * cx(-3.0, 1e-12) - 4.0);
  CHECK(left.real() < 0.0);

  // on the cut the root is positive imaginary
  const cx cut = hp_sqrt(cx(0.0, 1e-14) * cx(0.0, 1e-14) - 4.0);
  CHECK(cut.imag() > 0.0);
  CHECK(std::abs(cut - cx(0.0, 2.0)) < 1e-9);
}
