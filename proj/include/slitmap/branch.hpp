#pragma once

#include <complex>

namespace slitmap {

/// Half-plane-preserving square root: the branch with nonnegative imaginary
/// part, obtained by sign-correcting the principal branch.  With this choice
/// sqrt(z^2 - c) ~ z as z -> i*infinity, which is the branch every slit map
/// in this library uses.
inline std::complex<double> hp_sqrt(std::complex<double> u) {
  const std::complex<double> s = std::sqrt(u);
  return s.imag() < 0.0 ? -s : s;
}

}  // namespace slitmap
