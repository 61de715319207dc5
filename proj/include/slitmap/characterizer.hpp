#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "slitmap/measure.hpp"

namespace slitmap {

/// Decreasing welding homeomorphism h of the support interval: pairs the two
/// preimage sides of the slit by equality of (d, H).
struct WeldingMap {
  double a = 0.0, b = 0.0;
  std::vector<std::pair<double, double>> samples;  ///< (x, h(x)), x increasing
  double fixed_point = 0.0;                        ///< u with h(u) = u
  double max_residual = 0.0;  ///< max |d(h(x))-d(x)| + |H(h(x))-H(x)|

  double h(double x) const;  ///< monotone interpolation of the samples
};

enum class SlitCase { NonzeroC, ZeroC, Rejected };

struct ClauseReport {
  std::string name;
  bool pass = false;
  double evidence = 0.0;  ///< the decisive numeric witness
  std::string detail;
};

struct SlitVerdict {
  SlitCase kind = SlitCase::Rejected;
  double C = 0.0;  ///< slit base point (NonzeroC case), 0 in the ZeroC case
  std::vector<ClauseReport> clauses;
  std::optional<WeldingMap> welding;

  const ClauseReport* clause(const std::string& name) const;
};

struct CharacterizerOptions {
  int grid_n = 512;                    ///< profile nodes on [a,b]
  std::vector<double> eps_schedule;    ///< defaults to {1e-2, 5e-3, 2.5e-3}
  double endpoint_zero_tol = 2e-3;     ///< d(a), d(b) ~ 0 in the C != 0 case
  double continuity_modulus = 0.0;     ///< max adjacent jump; 0: 0.1*range + 1e-3
  double h_endpoint_tol = 5e-3;        ///< |H(a) - H(b)| in the C != 0 case
  double blowup_ratio = 1.8;           ///< growth per decade toward an endpoint
  double blowup_floor = 1.0;           ///< final probe value must exceed this
  double welding_residual_tol = 5e-2;  ///< NoWelding above this
};

/// Precomputed (d, H) profile of a measure whose density support is one
/// compact interval; H is the extrapolated radial Hilbert transform of the
/// full measure (atom included).
struct SupportProfile {
  double a = 0.0, b = 0.0;
  std::vector<double> x;
  std::vector<double> d;
  std::vector<double> H;
  std::vector<double> H_err;
  std::optional<Atom> atom;
};

SupportProfile build_profile(const Measure& mu, const CharacterizerOptions& opt = {});

/// Checks the slit-measure conditions: with an atom present the C != 0 case
/// (density vanishing at the endpoints, positive inside, H continuous off the
/// atom with H(a) = H(b) = 1/(pi C), welding); without an atom the C = 0 case
/// (endpoint blow-up of d or |H|, welding on the open interval).  Any failing
/// clause yields Rejected with numeric witnesses.
SlitVerdict check_slit_conditions(const Measure& mu, const CharacterizerOptions& opt = {});

/// Two-pointer monotone sweep from the endpoints, matching by equality of the
/// pair (d, H) (lexicographic metric, curve-length bracketing); throws
/// NoWeldingError with the first mismatch when no decreasing matching exists.
WeldingMap extract_welding(const Measure& mu, const CharacterizerOptions& opt = {});

struct SlitCurve {
  std::vector<double> params;                 ///< abscissas x in [a,b]
  std::vector<std::complex<double>> points;   ///< gamma(x) = 1/(pi(H - i d))
  std::vector<double> error_estimates;
  double tip_param = 0.0;                     ///< welding fixed point u
  std::complex<double> tip{};
};

/// gamma(x) = 1/(pi (H_mu(x) - i d(x))) on [a,b]; endpoints equal C (or 0).
SlitCurve reconstruct_slit(const Measure& mu, const CharacterizerOptions& opt = {});

struct AtomLocation {
  double position = 0.0;
  double weight = 0.0;
};

/// Atom from the density part alone: lambda = 1 - int d, and x0 from the
/// quadratic (x0-a)(x0-b) = lambda (b-a) / (pi (H_d(b) - H_d(a))), the root
/// on the side fixed by sign(C) (x0 < a iff C > 0).  Returns nullopt when
/// int d = 1 (no atom).
std::optional<AtomLocation> locate_atom(const DensitySegment& density, double h_d_at_a,
                                        double h_d_at_b, int c_sign);
/// Convenience: computes H_d(a), H_d(b) from the density segment.
std::optional<AtomLocation> locate_atom(const DensitySegment& density, int c_sign,
                                        const CharacterizerOptions& opt = {});

}  // namespace slitmap
