#pragma once

#include <complex>
#include <vector>

namespace slitmap {

enum class DrivingMode { RadialCircle, ChordalReal };
enum class DrivingInterpolation { PiecewiseConstant, Linear };

/// A sampled driving function kappa(t): boundary-circle valued in the radial
/// mode (stored as continuous unwrapped angles), real valued in the chordal
/// mode.  Radial linear interpolation happens on the angle.
class DrivingFunction {
 public:
  DrivingFunction() = default;

  static DrivingFunction radial(std::vector<double> times,
                                std::vector<std::complex<double>> circle_values,
                                DrivingInterpolation interp = DrivingInterpolation::Linear);
  static DrivingFunction radial_constant(std::complex<double> value);
  static DrivingFunction chordal(std::vector<double> times, std::vector<double> values,
                                 DrivingInterpolation interp = DrivingInterpolation::Linear);
  static DrivingFunction chordal_constant(double value);

  DrivingMode mode() const { return mode_; }
  DrivingInterpolation interpolation() const { return interp_; }
  const std::vector<double>& times() const { return times_; }
  /// Chordal values, or unwrapped angles in the radial mode.
  const std::vector<double>& values() const { return values_; }
  double t_max() const { return times_.back(); }

  /// Chordal value at t (mode must be ChordalReal).
  double value_at(double t) const;
  /// Circle point at t (mode must be RadialCircle).
  std::complex<double> circle_at(double t) const;

 private:
  double interp_value(double t) const;
  void check() const;

  DrivingMode mode_ = DrivingMode::ChordalReal;
  DrivingInterpolation interp_ = DrivingInterpolation::Linear;
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace slitmap
