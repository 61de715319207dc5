#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "slitmap/cauchy.hpp"
#include "slitmap/measure.hpp"

namespace slitmap {

struct ConvolutionResult {
  Measure measure;
  double residual = 0.0;  ///< max |F_result - F_mu(F_nu)| on held-out points
};

struct MonotoneOptions {
  int grid_n = 801;                  ///< inversion abscissas
  std::vector<double> eps_schedule;  ///< defaults to {1e-2, 5e-3, 2.5e-3}
  int pole_scan_n = 4001;            ///< real-axis scan resolution for atoms
  double density_floor = 1e-7;       ///< keep density runs above this
  int validation_points = 48;
};

/// Monotone convolution mu |> nu, defined by F-transform composition
/// F_{mu |> nu} = F_mu . F_nu: evaluates the composition on the upper
/// half-plane, recovers atoms by real-axis pole search on 1/(F_mu . F_nu)
/// (sign-change bracketing plus bisection, weights from the derivative),
/// recovers the density by Stieltjes-Perron inversion, and validates on a
/// held-out grid.  Both inputs must be compactly supported.
ConvolutionResult monotone_convolve(const Measure& mu, const Measure& nu,
                                    const MonotoneOptions& opt = {});

struct CollisionWitness {
  std::complex<double> z1{}, z2{};
  std::complex<double> f1{}, f2{};
  double value_gap = 0.0;
  double point_gap = 0.0;
};

struct WindingReport {
  std::complex<double> corner_lo{};  ///< sub-rectangle, lower-left
  std::complex<double> corner_hi{};  ///< upper-right
  std::complex<double> target{};     ///< F(center)
  int count = 0;
  bool conclusive = false;
};

struct UnivalenceDiagnostic {
  std::vector<CollisionWitness> collisions;
  std::vector<WindingReport> windings;
  bool is_probe = true;  ///< sampled diagnostics, never a certificate
  std::string note;
};

struct UnivalenceOptions {
  double grid_value_tol = 0.08;  ///< screening tolerance on |F(z1) - F(z2)|
  double separation = 0.05;      ///< minimal |z1 - z2| for a witness
  int subdivisions = 2;          ///< sub-rectangles per axis for windings
  double refined_tol = 1e-10;    ///< target value gap after Newton refinement
};

/// Injectivity probe on a sampled transform: reports near-collision pairs
/// (Newton-refined to the stated gap when an evaluator is supplied) and
/// argument-principle winding counts on sub-rectangle boundaries.  The grid
/// must be a rectangular lattice for the winding part.
UnivalenceDiagnostic univalence_probe(const TransformGrid& transform,
                                      const UnivalenceOptions& opt = {});
UnivalenceDiagnostic univalence_probe(const TransformGrid& transform,
                                      const TransformEvaluator& evaluator,
                                      const UnivalenceOptions& opt = {});

}  // namespace slitmap
