#include "slitmap/levy.hpp"

#include <cmath>

#include "slitmap/errors.hpp"

namespace slitmap {

void LevyTriple::validate() const {
  if (!(sigma >= 0.0)) throw StructureError("levy triple: sigma must be >= 0");
  jump.validate_structure();
  for (const Atom& a : jump.atoms())
    if (std::abs(a.position) < 1e-14)
      throw StructureError("levy triple: nu must not charge 0");
  for (const DensitySegment& s : jump.segments())
    if (s.a() <= 0.0 && s.b() >= 0.0 && s.value(0.0) > 1e-12)
      throw StructureError("levy triple: nu density positive at 0");
  // Compact support is implied by the encoding; min(1,t^2) integrability
  // then reduces to finiteness of the total mass.
  if (!std::isfinite(jump.total_mass()))
    throw StructureError("levy triple: nu has non-finite mass");
}

std::complex<double> levy_khintchine(const LevyTriple& triple, double x) {
  triple.validate();
  const std::complex<double> i(0.0, 1.0);
  std::complex<double> expo = i * triple.drift * x - 0.5 * triple.sigma * triple.sigma * x * x;
  const double cut = std::abs(x) < 1.0 ? 1.0 : 0.0;  // printed compensator cut-off
  auto integrand = [x, cut, i](double t) {
    return std::exp(i * x * t) - 1.0 - i * x * t * cut;
  };
  for (const Atom& a : triple.jump.atoms()) expo += a.weight * integrand(a.position);
  for (const DensitySegment& s : triple.jump.segments())
    expo += s.integrate_complex(integrand);
  return std::exp(expo);
}

NormalizedLevy normalize_levy(const LevyTriple& triple) {
  triple.validate();
  NormalizedLevy out{triple, -triple.drift};
  out.triple.drift = 0.0;
  return out;
}

EmbeddingVerdict unique_embedding(const LevyTriple& triple) {
  triple.validate();
  if (std::abs(triple.drift) > 1e-12)
    throw StructureError("unique_embedding: triple must be normalized to a=0 "
                         "(apply normalize_levy first)");
  const double nu_mass = triple.jump.total_mass();
  const bool nu_zero = nu_mass <= 1e-14;

  if (nu_zero) {
    if (triple.sigma > 1e-14)
      return {true, EmbeddingFamily::Gaussian,
              "nu = 0: normal distribution, variance sigma^2"};
    return {true, EmbeddingFamily::DiracAtZero, "nu = 0 and sigma = 0: Dirac at 0"};
  }

  const bool single_atom = triple.jump.segments().empty() && triple.jump.atoms().size() == 1;
  if (triple.sigma <= 1e-14 && single_atom)
    return {true, EmbeddingFamily::PoissonType,
            "sigma = 0 and nu = lambda*delta_{x0}: Poisson type"};

  EmbeddingVerdict v;
  v.unique = false;
  v.family = EmbeddingFamily::None;
  if (triple.sigma > 1e-14)
    v.detail = "fails both clauses: nu != 0 and sigma > 0";
  else if (!single_atom)
    v.detail = "fails the point-mass clause: nu is not a single point mass";
  return v;
}

}  // namespace slitmap
