#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "slitmap/extrapolate.hpp"
#include "slitmap/measure.hpp"

namespace slitmap {

enum class TransformKind { CauchyG, FTransform, Caratheodory };

/// Sampled values of a transform on its natural domain (upper half-plane for
/// the half-plane kinds, open unit disc for the Caratheodory kind).
class TransformGrid {
 public:
  TransformGrid(std::vector<std::complex<double>> points,
                std::vector<std::complex<double>> values, TransformKind kind);

  const std::vector<std::complex<double>>& points() const { return points_; }
  const std::vector<std::complex<double>>& values() const { return values_; }
  TransformKind kind() const { return kind_; }

 private:
  std::vector<std::complex<double>> points_;
  std::vector<std::complex<double>> values_;
  TransformKind kind_;
};

/// Pick-Nevanlinna data of an F-transform: F(z) = z + b + int (1+tz)/(t-z) rho(dt)
/// with rho finite and nonnegative.
struct PickNevanlinna {
  double b = 0.0;
  Measure rho;
};

std::complex<double> evaluate_pick_nevanlinna(const PickNevanlinna& pn,
                                              std::complex<double> z);

struct CauchyOptions {
  double proximity_tol = 1e-12;  ///< minimal distance from z to the support
};

/// Cauchy (Stieltjes) transform G_mu(z) = int 1/(z-t) dmu(t).
///
/// Atoms contribute exactly.  Density segments are integrated cell-exactly
/// against the piecewise-linear interpolant of the samples (the per-cell
/// antiderivative involves a complex logarithm), with local node refinement
/// around Re z when a closed form is available.  This stays accurate when z
/// sits a small distance above the support, which is what Stieltjes-Perron
/// inversion needs.
std::complex<double> cauchy_transform(const Measure& mu, std::complex<double> z,
                                      const CauchyOptions& opt = {});

/// F-transform F_mu = 1/G_mu.  Throws ProximityError near a zero of G.
std::complex<double> f_transform(const Measure& mu, std::complex<double> z,
                                 const CauchyOptions& opt = {});

/// Riesz-Herglotz integral int (u+z)/(u-z) dmu(u) over the unit circle, |z|<1.
std::complex<double> herglotz_caratheodory(const CircleMeasure& mu,
                                           std::complex<double> z);

using TransformEvaluator = std::function<std::complex<double>(std::complex<double>)>;

struct InversionPoint {
  double x = 0.0;
  double density = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

struct AtomCandidate {
  double position = 0.0;
  double weight = 0.0;
  double error_estimate = 0.0;
};

struct InversionResult {
  std::vector<InversionPoint> points;
  std::vector<AtomCandidate> atoms;
};

struct InversionOptions {
  int order = 1;                  ///< Richardson order for the density limit
  double atom_threshold = 1e-6;   ///< extrapolated |eps Im G| above this is an atom
  double pole_ratio = 1.7;        ///< |Im G| growth factor per eps halving near a pole
  bool refine_atoms = true;       ///< peak-refine atom positions between grid nodes
  double converged_abs = 1e-4;    ///< flags on the density error estimate
  double converged_rel = 1e-2;
};

/// Stieltjes-Perron inversion: density d(x) = -(1/pi) Im G(x+i eps) extrapolated
/// over the (strictly decreasing) eps schedule, plus atom candidates where
/// eps * Im G(x+i eps) tends to a nonzero limit -lambda.  Non-convergent
/// extrapolations are flagged per point, never averaged away.
InversionResult stieltjes_invert(const TransformEvaluator& g,
                                 std::span<const double> x_grid,
                                 std::span<const double> eps_schedule,
                                 const InversionOptions& opt = {});
InversionResult stieltjes_invert(const Measure& mu, std::span<const double> x_grid,
                                 std::span<const double> eps_schedule,
                                 const InversionOptions& opt = {});
/// Grid variant: every x + i*eps must be present among the grid points
/// (atom refinement is skipped; candidates sit on the given abscissas).
InversionResult stieltjes_invert(const TransformGrid& grid,
                                 std::span<const double> x_grid,
                                 std::span<const double> eps_schedule,
                                 const InversionOptions& opt = {});

enum class FVerdict { Plausible, Rejected, Inconclusive };

struct FCheckReport {
  FVerdict verdict = FVerdict::Inconclusive;
  std::string reason;
  std::complex<double> witness_point{};  ///< sample violating the range, if any
  std::complex<double> witness_value{};
  std::vector<double> ray_ratios;        ///< |F(iy)/(iy) - 1| along the ray
};

struct FCheckOptions {
  double range_tol = 1e-9;   ///< allowed dip of Im F below 0
  double ray_y_min = 5.0;    ///< samples with z ~ iy, y >= this, count as ray
  int min_ray_points = 3;
  double ray_tol = 0.05;     ///< final |F(iy)/(iy) - 1| must be below this
};

/// Sampled (not conclusive) check of the F-transform characterization:
/// range in the closed upper half-plane and F(iy)/(iy) -> 1 along the ray.
FCheckReport check_f_transform(const TransformGrid& samples,
                               const FCheckOptions& opt = {});

}  // namespace slitmap
