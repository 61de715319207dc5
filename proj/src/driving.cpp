#include "slitmap/driving.hpp"

#include <algorithm>
#include <cmath>

#include "slitmap/errors.hpp"

namespace slitmap {

DrivingFunction DrivingFunction::radial(std::vector<double> times,
                                        std::vector<std::complex<double>> circle_values,
                                        DrivingInterpolation interp) {
  DrivingFunction f;
  f.mode_ = DrivingMode::RadialCircle;
  f.interp_ = interp;
  f.times_ = std::move(times);
  if (f.times_.size() != circle_values.size())
    throw StructureError("driving function: time/value size mismatch");
  f.values_.resize(circle_values.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < circle_values.size(); ++i) {
    const std::complex<double>& u = circle_values[i];
    if (std::abs(std::abs(u) - 1.0) > 1e-12)
      throw StructureError("driving function: radial values must have unit modulus");
    double ang = std::atan2(u.imag(), u.real());
    if (i > 0) {
      // unwrap to the lift closest to the previous angle
      while (ang - prev > M_PI) ang -= 2.0 * M_PI;
      while (ang - prev < -M_PI) ang += 2.0 * M_PI;
    }
    f.values_[i] = ang;
    prev = ang;
  }
  f.check();
  return f;
}

DrivingFunction DrivingFunction::radial_constant(std::complex<double> value) {
  return radial({0.0}, {value}, DrivingInterpolation::PiecewiseConstant);
}

DrivingFunction DrivingFunction::chordal(std::vector<double> times,
                                         std::vector<double> values,
                                         DrivingInterpolation interp) {
  DrivingFunction f;
  f.mode_ = DrivingMode::ChordalReal;
  f.interp_ = interp;
  f.times_ = std::move(times);
  f.values_ = std::move(values);
  if (f.times_.size() != f.values_.size())
    throw StructureError("driving function: time/value size mismatch");
  f.check();
  return f;
}

DrivingFunction DrivingFunction::chordal_constant(double value) {
  return chordal({0.0}, {value}, DrivingInterpolation::PiecewiseConstant);
}

void DrivingFunction::check() const {
  if (times_.empty()) throw StructureError("driving function: empty time grid");
  if (times_.front() < 0.0) throw StructureError("driving function: times start before 0");
  for (std::size_t i = 0; i + 1 < times_.size(); ++i)
    if (!(times_[i] < times_[i + 1]))
      throw StructureError("driving function: time grid must be strictly increasing");
}

double DrivingFunction::interp_value(double t) const {
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (interp_ == DrivingInterpolation::PiecewiseConstant) return values_[j];
  const double u = (t - times_[j]) / (times_[j + 1] - times_[j]);
  return values_[j] * (1.0 - u) + values_[j + 1] * u;
}

double DrivingFunction::value_at(double t) const {
  if (mode_ != DrivingMode::ChordalReal)
    throw StructureError("driving function: value_at needs the chordal mode");
  return interp_value(t);
}

std::complex<double> DrivingFunction::circle_at(double t) const {
  if (mode_ != DrivingMode::RadialCircle)
    throw StructureError("driving function: circle_at needs the radial mode");
  return std::polar(1.0, interp_value(t));
}

}  // namespace slitmap
