#include "slitmap/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slitmap/errors.hpp"

namespace slitmap {

namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Simpson with an absolute tolerance and a depth cap.
template <typename T>
T adaptive_simpson(const std::function<T(double)>& f, double a, double b,
                   double tol, int max_depth) {
  struct Frame {
    double a, b;
    T fa, fm, fb, whole;
    double tol;
    int depth;
  };
  auto simpson = [](double a, double b, T fa, T fm, T fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };
  const double m0 = 0.5 * (a + b);
  T fa = f(a), fm = f(m0), fb = f(b);
  std::vector<Frame> stack;
  stack.push_back({a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 0});
  T total{};
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    const double m = 0.5 * (fr.a + fr.b);
    const double lm = 0.5 * (fr.a + m), rm = 0.5 * (m + fr.b);
    const T flm = f(lm), frm = f(rm);
    const T left = simpson(fr.a, m, fr.fa, flm, fr.fm);
    const T right = simpson(m, fr.b, fr.fm, frm, fr.fb);
    const T delta = left + right - fr.whole;
    if (std::abs(delta) <= 15.0 * fr.tol || fr.depth >= max_depth) {
      if (fr.depth >= max_depth && std::abs(delta) > 1e3 * 15.0 * fr.tol)
        throw QuadratureError("adaptive quadrature: depth exhausted far from tolerance");
      total += left + right + delta / 15.0;
    } else {
      stack.push_back({fr.a, m, fr.fa, flm, fr.fm, left, 0.5 * fr.tol, fr.depth + 1});
      stack.push_back({m, fr.b, fr.fm, frm, fr.fb, right, 0.5 * fr.tol, fr.depth + 1});
    }
  }
  return total;
}

// Composite Simpson over possibly non-uniform nodes: Simpson on uniform runs,
// trapezoid fallback elsewhere.
template <typename T>
T nodes_quadrature(const std::vector<double>& x, const std::vector<T>& y) {
  const std::size_t n = x.size();
  T total{};
  std::size_t i = 0;
  while (i + 1 < n) {
    const double h1 = x[i + 1] - x[i];
    if (i + 2 < n) {
      const double h2 = x[i + 2] - x[i + 1];
      if (std::abs(h1 - h2) <= 1e-12 * (std::abs(h1) + std::abs(h2))) {
        total += (h1 + h2) / 6.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
        i += 2;
        continue;
      }
    }
    total += 0.5 * h1 * (y[i] + y[i + 1]);
    i += 1;
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// DensitySegment

DensitySegment::DensitySegment(double a, double b, std::function<double(double)> density,
                               int n, NodeLayout layout)
    : a_(a), b_(b), layout_(layout), fn_(std::move(density)) {
  if (!(a_ < b_)) throw StructureError("density segment needs a < b");
  if (!fn_) throw StructureError("density segment: null callable");
  init_nodes(n > 0 ? n : 1025);
  values_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) values_[i] = fn_(nodes_[i]);
  check();
}

DensitySegment::DensitySegment(double a, double b, std::vector<double> values,
                               NodeLayout layout)
    : a_(a), b_(b), layout_(layout), values_(std::move(values)) {
  if (!(a_ < b_)) throw StructureError("density segment needs a < b");
  init_nodes(static_cast<int>(values_.size()));
  check();
}

DensitySegment::DensitySegment(double a, double b, std::vector<double> nodes,
                               std::vector<double> values)
    : a_(a), b_(b), layout_(NodeLayout::Cartesian),
      nodes_(std::move(nodes)), values_(std::move(values)) {
  if (!(a_ < b_)) throw StructureError("density segment needs a < b");
  if (nodes_.size() != values_.size())
    throw StructureError("density segment: node/value size mismatch");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (!(nodes_[i] < nodes_[i + 1]))
      throw StructureError("density segment: nodes must be strictly increasing");
  if (nodes_.front() < a_ - 1e-12 || nodes_.back() > b_ + 1e-12)
    throw StructureError("density segment: nodes outside [a,b]");
  check();
}

void DensitySegment::init_nodes(int n) {
  if (n < 5) throw StructureError("density segment: undersampled (need >= 5 nodes)");
  nodes_.resize(static_cast<std::size_t>(n));
  if (layout_ == NodeLayout::Cartesian) {
    const double h = (b_ - a_) / (n - 1);
    for (int i = 0; i < n; ++i) nodes_[static_cast<std::size_t>(i)] = a_ + h * i;
    nodes_.back() = b_;
  } else {
    // Chebyshev points of the first kind: strictly interior, dense at the ends.
    const double mid = 0.5 * (a_ + b_), rad = 0.5 * (b_ - a_);
    for (int i = 0; i < n; ++i) {
      const double theta = kPi * (i + 0.5) / n;
      nodes_[static_cast<std::size_t>(i)] = mid - rad * std::cos(theta);
    }
  }
}

void DensitySegment::check() const {
  if (values_.size() < 5) throw StructureError("density segment: undersampled");
  for (double v : values_)
    if (!(v >= -1e-12) || !std::isfinite(v))
      throw StructureError("density segment: negative or non-finite sample");
}

double DensitySegment::value(double x) const {
  if (x < a_ || x > b_) return 0.0;
  if (fn_) return fn_(x);
  const std::size_t n = nodes_.size();
  if (layout_ == NodeLayout::ChebyshevAngles) {
    // Linear interpolation in the angle variable; linear extrapolation into
    // the outer half-cells, clamped at zero.
    const double mid = 0.5 * (a_ + b_), rad = 0.5 * (b_ - a_);
    const double c = std::clamp((mid - x) / rad, -1.0, 1.0);
    const double theta = std::acos(c);
    const double dt = kPi / static_cast<double>(n);
    double u = theta / dt - 0.5;
    double t = u - std::floor(u);
    long j = static_cast<long>(std::floor(u));
    if (j < 0) { j = 0; t = u; }                                // extrapolate left
    if (j > static_cast<long>(n) - 2) { j = static_cast<long>(n) - 2; t = u - j; }
    const double v = values_[static_cast<std::size_t>(j)] * (1.0 - t) +
                     values_[static_cast<std::size_t>(j) + 1] * t;
    return std::max(v, 0.0);
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  if (it == nodes_.begin()) return values_.front();
  if (it == nodes_.end()) return values_.back();
  const std::size_t j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  const double t = (x - nodes_[j]) / (nodes_[j + 1] - nodes_[j]);
  return values_[j] * (1.0 - t) + values_[j + 1] * t;
}

namespace {

template <typename T>
T segment_integral(const DensitySegment& seg, const std::vector<double>& nodes,
                   const std::vector<double>& vals, NodeLayout layout,
                   bool closed_form, double quad_tol,
                   const std::function<T(double)>& weight) {
  if (layout == NodeLayout::ChebyshevAngles) {
    // Midpoint rule in theta; x = mid - rad*cos(theta), dx = rad*sin(theta) dtheta.
    const std::size_t n = nodes.size();
    const double rad = 0.5 * seg.length();
    const double dt = kPi / static_cast<double>(n);
    T total{};
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      total += weight(nodes[i]) * vals[i] * (rad * std::sin(theta)) * dt;
    }
    return total;
  }
  if (closed_form) {
    std::function<T(double)> f = [&](double x) { return weight(x) * seg.value(x); };
    return adaptive_simpson<T>(f, seg.a(), seg.b(), quad_tol, 48);
  }
  std::vector<T> y(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) y[i] = weight(nodes[i]) * vals[i];
  return nodes_quadrature<T>(nodes, y);
}

}  // namespace

double DensitySegment::integrate(const std::function<double(double)>& weight) const {
  return segment_integral<double>(*this, nodes_, values_, layout_, has_closed_form(),
                                  quad_tol, weight);
}

std::complex<double> DensitySegment::integrate_complex(
    const std::function<std::complex<double>(double)>& weight) const {
  return segment_integral<std::complex<double>>(*this, nodes_, values_, layout_,
                                                has_closed_form(), quad_tol, weight);
}

double DensitySegment::mass() const {
  return integrate([](double) { return 1.0; });
}

// ---------------------------------------------------------------------------
// Measure

Measure::Measure(std::vector<Atom> atoms, std::vector<DensitySegment> segments,
                 std::string label)
    : atoms_(std::move(atoms)), segments_(std::move(segments)), label_(std::move(label)) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& l, const Atom& r) { return l.position < r.position; });
  std::sort(segments_.begin(), segments_.end(),
            [](const DensitySegment& l, const DensitySegment& r) { return l.a() < r.a(); });
}

Measure Measure::point_mass(double position) {
  return from_atoms({{position, 1.0}});
}

Measure Measure::from_atoms(std::vector<Atom> atoms, std::string label) {
  return Measure(std::move(atoms), {}, std::move(label));
}

double Measure::atom_mass() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.weight;
  return m;
}

double Measure::density_mass() const {
  double m = 0.0;
  for (const DensitySegment& s : segments_) m += s.mass();
  return m;
}

double Measure::total_mass() const { return atom_mass() + density_mass(); }

double Measure::density_value(double x) const {
  double d = 0.0;
  for (const DensitySegment& s : segments_) d += s.value(x);
  return d;
}

double Measure::support_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Atom& a : atoms_) m = std::min(m, a.position);
  for (const DensitySegment& s : segments_) m = std::min(m, s.a());
  return m;
}

double Measure::support_max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const Atom& a : atoms_) m = std::max(m, a.position);
  for (const DensitySegment& s : segments_) m = std::max(m, s.b());
  return m;
}

double Measure::support_distance(std::complex<double> z) const {
  double d = std::numeric_limits<double>::infinity();
  const double y = std::abs(z.imag());
  for (const Atom& a : atoms_)
    d = std::min(d, std::hypot(z.real() - a.position, y));
  for (const DensitySegment& s : segments_) {
    const double dx = (z.real() < s.a())   ? s.a() - z.real()
                      : (z.real() > s.b()) ? z.real() - s.b()
                                           : 0.0;
    d = std::min(d, std::hypot(dx, y));
  }
  return d;
}

void Measure::validate_structure() const {
  for (const Atom& a : atoms_) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw StructureError("measure: atom weight must be positive and finite");
    if (!std::isfinite(a.position)) throw StructureError("measure: atom position not finite");
  }
  for (std::size_t i = 0; i + 1 < atoms_.size(); ++i)
    if (!(atoms_[i].position < atoms_[i + 1].position))
      throw StructureError("measure: atom positions must be pairwise distinct");
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i)
    if (segments_[i].b() > segments_[i + 1].a() + 1e-12)
      throw StructureError("measure: overlapping density segments");
}

void Measure::validate_probability() const {
  validate_structure();
  for (const Atom& a : atoms_)
    if (a.weight > 1.0 + 1e-12)
      throw StructureError("measure: atom weight above 1 in a probability measure");
  const double m = total_mass();
  if (std::abs(m - 1.0) > mass_tolerance)
    throw StructureError("measure: total mass " + std::to_string(m) +
                         " violates the probability invariant (tol " +
                         std::to_string(mass_tolerance) + ")");
}

double Measure::raw_moment(int k) const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.weight * std::pow(a.position, k);
  for (const DensitySegment& s : segments_)
    m += s.integrate([k](double x) { return std::pow(x, k); });
  return m;
}

double Measure::moment(int k) const {
  if (k == 2) {
    const double m1 = raw_moment(1);
    return raw_moment(2) - m1 * m1;
  }
  return raw_moment(k);
}

std::complex<double> Measure::fourier_transform(double x) const {
  std::complex<double> f{0.0, 0.0};
  for (const Atom& a : atoms_)
    f += a.weight * std::exp(std::complex<double>(0.0, x * a.position));
  for (const DensitySegment& s : segments_)
    f += s.integrate_complex(
        [x](double t) { return std::exp(std::complex<double>(0.0, x * t)); });
  return f;
}

// ---------------------------------------------------------------------------
// Classical convolution

namespace {

void merge_atom(std::vector<Atom>& atoms, double pos, double w) {
  for (Atom& a : atoms) {
    if (std::abs(a.position - pos) <= 1e-12 * std::max(1.0, std::abs(pos))) {
      a.weight += w;
      return;
    }
  }
  atoms.push_back({pos, w});
}

// Resample a segment to a uniform grid of n nodes (including endpoints).
std::vector<double> resample_uniform(const DensitySegment& s, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  const double h = s.length() / (n - 1);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = s.value(s.a() + h * i);
  return v;
}

}  // namespace

Measure convolve_classical(const Measure& mu, const Measure& nu) {
  mu.validate_probability();
  nu.validate_probability();

  std::vector<Atom> atoms;
  std::vector<DensitySegment> segments;
  std::string notes;

  // atomic x atomic: exact
  for (const Atom& a : mu.atoms())
    for (const Atom& b : nu.atoms()) merge_atom(atoms, a.position + b.position, a.weight * b.weight);

  // atom x segment: shifted, weight-scaled copies
  auto shifted_segments = [&segments](const Measure& m_atoms, const Measure& m_dens) {
    for (const Atom& a : m_atoms.atoms()) {
      for (const DensitySegment& s : m_dens.segments()) {
        const double p = a.position, w = a.weight;
        std::vector<double> nodes = s.nodes(), vals = s.values();
        for (double& x : nodes) x += p;
        for (double& v : vals) v *= w;
        if (s.layout() == NodeLayout::ChebyshevAngles)
          segments.emplace_back(s.a() + p, s.b() + p, std::move(vals),
                                NodeLayout::ChebyshevAngles);
        else
          segments.emplace_back(s.a() + p, s.b() + p, std::move(nodes), std::move(vals));
      }
    }
  };
  shifted_segments(mu, nu);
  shifted_segments(nu, mu);

  // density x density: direct double sum on a uniform output grid,
  // mass-renormalized afterwards
  for (const DensitySegment& s1 : mu.segments()) {
    for (const DensitySegment& s2 : nu.segments()) {
      const double target_mass = s1.mass() * s2.mass();
      const int n1 = std::min<int>(2049, std::max<int>(129, static_cast<int>(s1.nodes().size())));
      const int n2 = std::min<int>(2049, std::max<int>(129, static_cast<int>(s2.nodes().size())));
      const int m1 = std::min(4096, n1);
      const std::vector<double> v1 = resample_uniform(s1, m1);
      const double h1 = s1.length() / (m1 - 1);
      const double lo = s1.a() + s2.a();
      const double hi = s1.b() + s2.b();
      const int mo = std::min(4096, m1 + std::min(4096, n2) - 1);
      const double ho = (hi - lo) / (mo - 1);
      std::vector<double> out(static_cast<std::size_t>(mo), 0.0);
      for (int k = 0; k < mo; ++k) {
        const double x = lo + ho * k;
        double acc = 0.0;
        for (int i = 0; i < m1; ++i) {
          const double wi = (i == 0 || i == m1 - 1) ? 0.5 : 1.0;
          acc += wi * v1[static_cast<std::size_t>(i)] * s2.value(x - (s1.a() + h1 * i));
        }
        out[static_cast<std::size_t>(k)] = acc * h1;
      }
      DensitySegment seg(lo, hi, std::move(out), NodeLayout::Cartesian);
      const double got = seg.mass();
      if (got > 0.0 && target_mass > 0.0) {
        const double scale = target_mass / got;
        std::vector<double> vals = seg.values();
        for (double& v : vals) v *= scale;
        seg = DensitySegment(lo, hi, std::move(vals), NodeLayout::Cartesian);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "density*density renormalized by %.6g; ", scale);
        notes += buf;
      }
      segments.push_back(std::move(seg));
    }
  }

  std::string label = "convolution";
  if (!notes.empty()) label += " [" + notes + "]";
  Measure out(std::move(atoms), std::move(segments), std::move(label));
  out.mass_tolerance = std::max(mu.mass_tolerance, nu.mass_tolerance) + 1e-9;
  return out;
}

Measure translate(const Measure& mu, double c) {
  std::vector<Atom> atoms = mu.atoms();
  for (Atom& a : atoms) a.position += c;
  std::vector<DensitySegment> segments;
  for (const DensitySegment& s : mu.segments()) {
    // Translated copies keep the node samples; closed forms are not re-wrapped
    // (a shifted callable would have to own the original segment).
    std::vector<double> vals = s.values();
    if (s.layout() == NodeLayout::ChebyshevAngles) {
      segments.emplace_back(s.a() + c, s.b() + c, std::move(vals), NodeLayout::ChebyshevAngles);
    } else {
      std::vector<double> nodes = s.nodes();
      for (double& x : nodes) x += c;
      segments.emplace_back(s.a() + c, s.b() + c, std::move(nodes), std::move(vals));
    }
  }
  Measure out(std::move(atoms), std::move(segments), mu.label());
  out.mass_tolerance = mu.mass_tolerance;
  return out;
}

// ---------------------------------------------------------------------------
// Formula registry

DensitySegment formula_segment(const std::string& id, double a, double b, int n) {
  if (!(a < b)) throw StructureError("formula segment needs a < b");
  const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
  if (id == "arcsine") {
    auto d = [mid, rad](double x) {
      const double u = rad * rad - (x - mid) * (x - mid);
      return u > 0.0 ? 1.0 / (kPi * std::sqrt(u)) : 0.0;
    };
    return DensitySegment(a, b, d, n > 0 ? n : 1025, NodeLayout::ChebyshevAngles);
  }
  if (id == "semicircle") {
    auto d = [mid, rad](double x) {
      const double u = rad * rad - (x - mid) * (x - mid);
      return u > 0.0 ? 2.0 * std::sqrt(u) / (kPi * rad * rad) : 0.0;
    };
    return DensitySegment(a, b, d, n > 0 ? n : 1025, NodeLayout::ChebyshevAngles);
  }
  if (id == "uniform") {
    const double v = 1.0 / (b - a);
    return DensitySegment(a, b, [v](double) { return v; }, n > 0 ? n : 257,
                          NodeLayout::Cartesian);
  }
  if (id == "bump") {
    auto raw = [mid, rad](double x) {
      const double u = (x - mid) / rad;
      const double w = 1.0 - u * u;
      return w > 1e-300 ? std::exp(-1.0 / w) : 0.0;
    };
    DensitySegment probe(a, b, raw, 513, NodeLayout::Cartesian);
    const double z = probe.mass();
    auto d = [raw, z](double x) { return raw(x) / z; };
    return DensitySegment(a, b, d, n > 0 ? n : 513, NodeLayout::Cartesian);
  }
  throw StructureError("unknown density formula id: " + id);
}

// ---------------------------------------------------------------------------
// CircleMeasure

CircleMeasure::CircleMeasure(std::vector<CircleAtom> atoms) : atoms_(std::move(atoms)) {}

CircleMeasure::CircleMeasure(std::vector<CircleAtom> atoms,
                             std::function<double(double)> density, int n)
    : atoms_(std::move(atoms)) {
  if (n < 8) throw StructureError("circle measure: density undersampled");
  density_values_.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double th = 2.0 * kPi * j / n;
    const double v = density(th);
    if (!(v >= 0.0)) throw StructureError("circle measure: negative density sample");
    density_values_[static_cast<std::size_t>(j)] = v;
  }
}

CircleMeasure CircleMeasure::uniform() {
  return CircleMeasure({}, [](double) { return 1.0 / (2.0 * kPi); }, 512);
}

CircleMeasure CircleMeasure::point(std::complex<double> u) {
  const double r = std::abs(u);
  if (std::abs(r - 1.0) > 1e-9)
    throw StructureError("circle measure: point mass must have unit modulus");
  return CircleMeasure({{std::atan2(u.imag(), u.real()), 1.0}});
}

double CircleMeasure::total_mass() const {
  double m = 0.0;
  for (const CircleAtom& a : atoms_) m += a.weight;
  if (!density_values_.empty()) {
    const double dt = 2.0 * kPi / static_cast<double>(density_values_.size());
    for (double v : density_values_) m += v * dt;
  }
  return m;
}

void CircleMeasure::validate_probability(double tol) const {
  for (const CircleAtom& a : atoms_)
    if (!(a.weight > 0.0)) throw StructureError("circle measure: nonpositive atom weight");
  if (std::abs(total_mass() - 1.0) > tol)
    throw StructureError("circle measure: total mass violates probability invariant");
}

std::complex<double> CircleMeasure::integrate(
    const std::function<std::complex<double>(double)>& w) const {
  std::complex<double> total{};
  for (const CircleAtom& a : atoms_) total += a.weight * w(a.angle);
  if (!density_values_.empty()) {
    const std::size_t n = density_values_.size();
    const double dt = 2.0 * kPi / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
      total += density_values_[j] * w(dt * static_cast<double>(j)) * dt;
  }
  return total;
}

}  // namespace slitmap
