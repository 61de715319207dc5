#pragma once

#include <complex>
#include <string>

#include "slitmap/measure.hpp"

namespace slitmap {

/// Levy triple (a, sigma, nu) of an infinitely divisible law.  The jump
/// measure nu uses the Measure encoding without the unit-mass constraint;
/// it must have no atom at 0 and compact support (the encoded class).
struct LevyTriple {
  double drift = 0.0;    ///< a
  double sigma = 0.0;    ///< Gaussian part, >= 0
  Measure jump;          ///< nu

  void validate() const;
};

/// Characteristic function of the triple: evaluates the Levy-Khintchine
/// exponent exactly as printed, including the compensator cut-off 1_{|x|<1}
/// on the Fourier variable.  (The usual convention cuts on the jump size
/// instead; the two agree whenever |x| >= 1, or when every jump has modulus
/// >= 1.  This library fixes the printed form and documents it here.)
std::complex<double> levy_khintchine(const LevyTriple& triple, double x);

struct NormalizedLevy {
  LevyTriple triple;  ///< drift set to 0
  double shift;       ///< c with L(mu(. - c)) = (a + c, sigma, nu)
};

/// Returns the triple with drift removed and the recorded shift.
NormalizedLevy normalize_levy(const LevyTriple& triple);

enum class EmbeddingFamily { DiracAtZero, Gaussian, PoissonType, None };

struct EmbeddingVerdict {
  bool unique = false;
  EmbeddingFamily family = EmbeddingFamily::None;
  std::string detail;
};

/// Unique-embedding criterion for normalized triples (drift must be 0;
/// apply normalize_levy first): unique iff nu = 0, or sigma = 0 and
/// nu = lambda * delta_{x0} for a single x0 != 0.  The diagnostic names
/// the family or the failing clause.
EmbeddingVerdict unique_embedding(const LevyTriple& triple);

}  // namespace slitmap
