#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "slitmap/driving.hpp"
#include "slitmap/measure.hpp"

namespace slitmap {

/// A simple polyline in the closed upper half-plane: first vertex on the real
/// line, the rest strictly above it.
class SlitPolyline {
 public:
  explicit SlitPolyline(std::vector<std::complex<double>> vertices, bool validate = true);

  const std::vector<std::complex<double>>& vertices() const { return vertices_; }
  double base() const { return vertices_.front().real(); }
  std::complex<double> tip() const { return vertices_.back(); }

  /// Pairwise segment test at desk scale; true when no two non-adjacent
  /// edges intersect.
  bool is_simple() const;

 private:
  std::vector<std::complex<double>> vertices_;
};

/// Symmetric Hausdorff distance between two polylines (point-to-segment).
double hausdorff_distance(const SlitPolyline& p, const SlitPolyline& q);

struct CapacityRecord {
  double total = 0.0;
  std::vector<double> increments;
};

/// Elementary vertical-slit map with foot xi and height h (capacity h^2/2).
/// erase() maps H minus the slit onto H (sends the tip to xi); build() is the
/// inverse.  The real-line variants evaluate the boundary continuation off
/// the swallowed interval [xi-h, xi+h].
struct ElementarySlitMap {
  double xi = 0.0;
  double h = 0.0;

  std::complex<double> erase(std::complex<double> w) const;
  std::complex<double> build(std::complex<double> z) const;
  double build_real(double x) const;
  /// d build / dz
  std::complex<double> build_deriv(std::complex<double> z) const;
};

struct ZipperOptions {
  double max_step_capacity = 0.01;  ///< per-step capacity cap (refines until met)
  int max_steps = 200000;
  double zero_base_tol = 1e-9;      ///< |C| below this counts as a slit from 0
};

/// Full encoding result: driving function in the capacity parametrization,
/// capacity bookkeeping, the elementary maps, and the preimage interval
/// [support_a, support_b] of the slit under the composed map.
struct EncodedSlit {
  DrivingFunction kappa;                 // chordal
  CapacityRecord capacity;
  std::vector<ElementarySlitMap> maps;   // maps[0] erases the first piece
  double support_a = 0.0;
  double support_b = 0.0;

  /// Composed slit map F = build_1(build_2(...build_n(z))): hydrodynamically
  /// normalized, maps H onto H minus the slit.
  std::complex<double> map(std::complex<double> z) const;
  /// Boundary value on the real line off [support_a, support_b].
  double map_real(double x) const;
  /// F and F' together (chain rule through the composition).
  std::pair<std::complex<double>, std::complex<double>> map_with_deriv(
      std::complex<double> z) const;
  double deriv_real(double x) const;
};

/// Gamma -> kappa: erase the polyline piece by piece with vertical-slit maps,
/// subdividing edges until every capacity increment is below the cap.
EncodedSlit encode_slit_full(const SlitPolyline& slit, const ZipperOptions& opt = {});
std::pair<DrivingFunction, CapacityRecord> encode_slit(const SlitPolyline& slit,
                                                       const ZipperOptions& opt = {});

struct DecodedTrace {
  SlitPolyline trace;
  bool simple = true;
  std::optional<double> first_intersection_time;  ///< capacity time of the offending step
};

/// kappa -> tip trace: runs the composition forward.  A self-intersecting
/// trace is reported as a non-slit outcome, not a failure.
DecodedTrace decode_driving(const DrivingFunction& kappa, const CapacityRecord& capacity,
                            const ZipperOptions& opt = {});

struct SlitMeasureOptions {
  ZipperOptions zipper{};
  int grid_n = 513;                     ///< density nodes on the support interval
  std::vector<double> eps_schedule;     ///< defaults to {1e-2, 5e-3, 2.5e-3}
  double mass_tolerance = 5e-3;         ///< declared on the produced measure
};

/// The probability measure whose F-transform is the hydrodynamically
/// normalized map onto the slit complement: builds the composed map, inverts
/// 1/F along the eps schedule, and locates the atom (present exactly when the
/// slit does not start at 0) through the real zero of F.
Measure slit_to_measure(const SlitPolyline& slit, const SlitMeasureOptions& opt = {});

enum class CayleyDirection { DiscToHalfPlane, HalfPlaneToDisc };

/// Fixed Cayley pair: disc -> half-plane z |-> i(1+z)/(1-z) (0 |-> i,
/// -1 |-> 0, 1 |-> infinity, i |-> -1) and its inverse w |-> (w-i)/(w+i).
std::complex<double> cayley(std::complex<double> z, CayleyDirection direction);

}  // namespace slitmap
