#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace slitmap {

struct Atom {
  double position = 0.0;
  double weight = 0.0;
};

/// Node layout of a sampled density segment.  Cartesian nodes are integrated
/// with composite Simpson/trapezoid in x; ChebyshevAngles nodes are the
/// Chebyshev points of the first kind, integrated with the midpoint rule in
/// the angle variable, which absorbs inverse-square-root endpoint blow-ups
/// (arcsine-type densities) without losing accuracy.
enum class NodeLayout { Cartesian, ChebyshevAngles };

/// One density piece of a measure: a nonnegative function on [a,b], stored as
/// node samples and, when available, as a closed-form callable.
class DensitySegment {
 public:
  /// Closed form, sampled at `n` layout nodes (callable is kept).
  DensitySegment(double a, double b, std::function<double(double)> density,
                 int n = 1025, NodeLayout layout = NodeLayout::Cartesian);
  /// Samples only, on layout nodes implied by `layout` (Cartesian: uniform
  /// including endpoints; ChebyshevAngles: first-kind Chebyshev points).
  DensitySegment(double a, double b, std::vector<double> values,
                 NodeLayout layout = NodeLayout::Cartesian);
  /// Samples on explicit strictly increasing Cartesian nodes in [a,b].
  DensitySegment(double a, double b, std::vector<double> nodes, std::vector<double> values);

  double a() const { return a_; }
  double b() const { return b_; }
  double length() const { return b_ - a_; }
  NodeLayout layout() const { return layout_; }
  bool has_closed_form() const { return static_cast<bool>(fn_); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

  /// Density value at x (0 outside [a,b]); interpolated when no closed form.
  double value(double x) const;

  /// Integral of weight(x) * density(x) over [a,b].
  double integrate(const std::function<double(double)>& weight) const;
  std::complex<double> integrate_complex(
      const std::function<std::complex<double>(double)>& weight) const;

  double mass() const;

  /// Tolerance for the adaptive quadrature used on closed-form segments.
  double quad_tol = 1e-11;

 private:
  void init_nodes(int n);
  void check() const;

  double a_ = 0.0, b_ = 0.0;
  NodeLayout layout_ = NodeLayout::Cartesian;
  std::function<double(double)> fn_;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// A finite positive measure on the real line: atoms plus density segments.
/// Probability instances are validated against `mass_tolerance`.
class Measure {
 public:
  Measure() = default;
  Measure(std::vector<Atom> atoms, std::vector<DensitySegment> segments,
          std::string label = {});

  static Measure point_mass(double position);
  static Measure from_atoms(std::vector<Atom> atoms, std::string label = {});

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensitySegment>& segments() const { return segments_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  bool is_atomic() const { return segments_.empty(); }
  bool has_density() const { return !segments_.empty(); }

  double atom_mass() const;
  double density_mass() const;
  double total_mass() const;

  /// Density value at x, summed over segments (atoms excluded).
  double density_value(double x) const;

  /// Smallest / largest point of the support (atoms and segments).
  double support_min() const;
  double support_max() const;
  /// Distance from a complex point to the support.
  double support_distance(std::complex<double> z) const;

  /// Structural invariants: distinct atoms, positive weights, ordered
  /// non-overlapping segments, nonnegative samples.  Throws StructureError.
  void validate_structure() const;
  /// Structure plus |total mass - 1| <= mass_tolerance.
  void validate_probability() const;

  /// k-th raw moment for k != 2; the variance (second central moment) for k=2.
  double moment(int k) const;
  double raw_moment(int k) const;

  /// Integral of e^{ixt} dmu(t).
  std::complex<double> fourier_transform(double x) const;

  /// Declared quadrature tolerance on the probability-mass invariant.
  double mass_tolerance = 1e-6;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensitySegment> segments_;
  std::string label_;
};

/// Classical convolution mu * nu, defined by F_{mu*nu} = F_mu . F_nu.
/// Atomic x atomic is exact; density parts use grid convolution at desk scale
/// (<= 4096 nodes).  Resampling and renormalization of the density-x-density
/// part are recorded in the result label, never silent.
Measure convolve_classical(const Measure& mu, const Measure& nu);

/// Translate a measure by c.
Measure translate(const Measure& mu, double c);

/// Registered closed-form densities for fixtures and file input:
///   "arcsine"    1/(pi sqrt(r^2-(x-m)^2))      (Chebyshev layout)
///   "semicircle" 2 sqrt(r^2-(x-m)^2)/(pi r^2)  (Chebyshev layout)
///   "uniform"    1/(b-a)
///   "bump"       normalized exp(-1/(1-u^2)), u=(x-m)/r
/// with m=(a+b)/2, r=(b-a)/2.  Unknown id -> StructureError.
DensitySegment formula_segment(const std::string& id, double a, double b, int n = 0);

/// A probability measure on the unit circle: atoms at angles plus a density
/// in the angle variable, integrated by the periodic trapezoid rule.
class CircleMeasure {
 public:
  struct CircleAtom {
    double angle = 0.0;  ///< in [0, 2*pi)
    double weight = 0.0;
  };

  CircleMeasure() = default;
  explicit CircleMeasure(std::vector<CircleAtom> atoms);
  CircleMeasure(std::vector<CircleAtom> atoms, std::function<double(double)> density,
                int n = 512);

  static CircleMeasure uniform();
  static CircleMeasure point(std::complex<double> u);

  const std::vector<CircleAtom>& atoms() const { return atoms_; }
  bool has_density() const { return !density_values_.empty(); }

  double total_mass() const;
  void validate_probability(double tol = 1e-9) const;

  /// Integral of w(theta) against the measure.
  std::complex<double> integrate(
      const std::function<std::complex<double>(double)>& w) const;

 private:
  std::vector<CircleAtom> atoms_;
  std::vector<double> density_values_;  // at theta_j = 2*pi*j/n
};

}  // namespace slitmap
