#pragma once

#include <complex>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "slitmap/driving.hpp"
#include "slitmap/measure.hpp"

namespace slitmap {

/// Herglotz vector field p(t, z) on the disc: Re p > 0, p(t, 0) = 1.
/// Three variants: a single boundary driving point (slit field
/// p = (kappa - z)/(kappa + z)), a convex combination of such fields
/// (simultaneous multi-slit erasure), and a boundary-measure family evaluated
/// through the Riesz-Herglotz integral.
class HerglotzField {
 public:
  struct SingleDriving {
    DrivingFunction kappa;  // radial mode
  };
  struct Component {
    DrivingFunction kappa;
    double weight;
  };
  struct ConvexCombination {
    std::vector<Component> components;  // weights positive, summing to 1
  };
  struct BoundaryMeasureFamily {
    std::function<CircleMeasure(double)> measure_at;
  };

  HerglotzField(SingleDriving v);             // NOLINT(google-explicit-constructor)
  HerglotzField(ConvexCombination v);         // NOLINT(google-explicit-constructor)
  HerglotzField(BoundaryMeasureFamily v);     // NOLINT(google-explicit-constructor)

  static HerglotzField single(DrivingFunction kappa);
  static HerglotzField convex(std::vector<Component> components);
  static HerglotzField boundary_family(std::function<CircleMeasure(double)> f);
  /// p(t, z) = 1 for all t: the uniform boundary measure.
  static HerglotzField radial_uniform();

  /// p(t, z); throws DomainError unless |z| < 1.
  std::complex<double> evaluate(double t, std::complex<double> z) const;

  bool is_slit_like() const;  ///< has driving-point poles at -kappa_j
  /// Distance from w to the nearest field pole -kappa_j(t); +inf otherwise.
  double pole_distance(double t, std::complex<double> w) const;
  /// Driving-function breakpoints within [s, t] (integration restarts there).
  std::vector<double> breakpoints(double s, double t) const;

 private:
  std::variant<SingleDriving, ConvexCombination, BoundaryMeasureFamily> field_;
};

struct TransitionPoint {
  std::complex<double> value{};   ///< phi_{s,t}(z), or the state where the solver stopped
  double reached_time = 0.0;
  bool complete = false;
};

struct LoewnerOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double pole_step_fraction = 0.1;  ///< max step 0.1*|w + kappa(t)| for slit fields
  double min_step = 1e-14;
};

/// Solves dw/dt = -w p(t, w), w(s) = z, on [s, t] for each grid point with an
/// embedded Dormand-Prince 5(4) pair.  Step underflow near the driving
/// singularity yields a partial result carrying the reached time.
std::vector<TransitionPoint> solve_transition(const HerglotzField& field, double s,
                                              double t,
                                              std::span<const std::complex<double>> z_grid,
                                              const LoewnerOptions& opt = {});

struct ChainValue {
  std::complex<double> value{};
  double error_estimate = 0.0;  ///< change under the last horizon doubling
};

struct ChainOptions {
  LoewnerOptions ode{};
  double horizon_start = 8.0;
  double horizon_max = 64.0;
  double tol = 1e-6;
};

struct ChainResult {
  std::vector<ChainValue> values;  ///< f_s(z) = lim e^t phi_{s,t}(z)
  double horizon_used = 0.0;
};

/// Loewner-chain element f_s = lim_{t->inf} e^t phi_{s,t}, computed by horizon
/// doubling from T = horizon_start until successive values move less than tol
/// (ConvergenceError if horizon_max is hit first).
ChainResult chain_initial(const HerglotzField& field, double s,
                          std::span<const std::complex<double>> z_grid,
                          const ChainOptions& opt = {});

}  // namespace slitmap
