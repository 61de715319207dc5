#include "slitmap/zipper.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "slitmap/branch.hpp"
#include "slitmap/cauchy.hpp"
#include "slitmap/errors.hpp"

namespace slitmap {

namespace {

using cx = std::complex<double>;

// Proper intersection test for closed segments, with a small slack so that
// shared endpoints of adjacent edges do not count.
bool segments_intersect(cx a, cx b, cx c, cx d) {
  auto cross = [](cx u, cx v) { return u.real() * v.imag() - u.imag() * v.real(); };
  const double d1 = cross(d - c, a - c);
  const double d2 = cross(d - c, b - c);
  const double d3 = cross(b - a, c - a);
  const double d4 = cross(b - a, d - a);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_segment = [](cx p, cx q, cx r) {
    return std::min(p.real(), q.real()) - 1e-15 <= r.real() &&
           r.real() <= std::max(p.real(), q.real()) + 1e-15 &&
           std::min(p.imag(), q.imag()) - 1e-15 <= r.imag() &&
           r.imag() <= std::max(p.imag(), q.imag()) + 1e-15;
  };
  if (std::abs(d1) < 1e-15 && on_segment(c, d, a)) return true;
  if (std::abs(d2) < 1e-15 && on_segment(c, d, b)) return true;
  if (std::abs(d3) < 1e-15 && on_segment(a, b, c)) return true;
  if (std::abs(d4) < 1e-15 && on_segment(a, b, d)) return true;
  return false;
}

double point_segment_distance(cx p, cx a, cx b) {
  const cx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

// ---------------------------------------------------------------------------
// SlitPolyline

SlitPolyline::SlitPolyline(std::vector<cx> vertices, bool validate)
    : vertices_(std::move(vertices)) {
  if (!validate) return;
  if (vertices_.size() < 2) throw GeometryError("slit polyline: need at least 2 vertices");
  if (std::abs(vertices_.front().imag()) > 1e-12)
    throw GeometryError("slit polyline: first vertex must lie on the real line");
  vertices_.front() = cx(vertices_.front().real(), 0.0);
  for (std::size_t i = 1; i < vertices_.size(); ++i)
    if (!(vertices_[i].imag() > 0.0))
      throw GeometryError("slit polyline: interior vertices must have positive imaginary part");
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
    if (std::abs(vertices_[i + 1] - vertices_[i]) < 1e-14)
      throw GeometryError("slit polyline: degenerate edge");
  if (!is_simple()) throw GeometryError("slit polyline: self-intersecting");
}

bool SlitPolyline::is_simple() const {
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    for (std::size_t j = i + 2; j + 1 < vertices_.size(); ++j) {
      if (segments_intersect(vertices_[i], vertices_[i + 1], vertices_[j], vertices_[j + 1]))
        return false;
    }
  }
  return true;
}

double hausdorff_distance(const SlitPolyline& p, const SlitPolyline& q) {
  auto one_sided = [](const SlitPolyline& from, const SlitPolyline& to) {
    double worst = 0.0;
    const auto& tv = to.vertices();
    for (const cx& v : from.vertices()) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j + 1 < tv.size(); ++j)
        best = std::min(best, point_segment_distance(v, tv[j], tv[j + 1]));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(p, q), one_sided(q, p));
}

// ---------------------------------------------------------------------------
// Elementary maps

std::complex<double> ElementarySlitMap::erase(cx w) const {
  const cx u = w - xi;
  return xi + hp_sqrt(u * u + h * h);
}

std::complex<double> ElementarySlitMap::build(cx z) const {
  const cx u = z - xi;
  return xi + hp_sqrt(u * u - h * h);
}

double ElementarySlitMap::build_real(double x) const {
  const double u = x - xi;
  if (std::abs(u) <= h)
    throw DomainError("elementary map: real point inside the swallowed interval");
  return xi + (u > 0 ? 1.0 : -1.0) * std::sqrt(u * u - h * h);
}

std::complex<double> ElementarySlitMap::build_deriv(cx z) const {
  const cx u = z - xi;
  return u / hp_sqrt(u * u - h * h);
}

// ---------------------------------------------------------------------------
// Encoding

EncodedSlit encode_slit_full(const SlitPolyline& slit, const ZipperOptions& opt) {
  if (!(opt.max_step_capacity > 0.0))
    throw StructureError("encode_slit: capacity cap must be positive");

  EncodedSlit enc;
  const auto& verts = slit.vertices();
  std::deque<cx> pending(verts.begin() + 1, verts.end());

  double t = 0.0;
  double prev_foot = verts.front().real();
  std::vector<double> times = {0.0};
  std::vector<double> kappa_vals = {prev_foot};
  bool have_support = false;

  int steps = 0;
  while (!pending.empty()) {
    if (++steps > opt.max_steps)
      throw ConvergenceError("encode_slit: step budget exhausted before the tip "
                             "(lower max_step_capacity or simplify the slit)");
    const cx w1 = pending.front();
    const double h = w1.imag();
    const double dc = 0.5 * h * h;
    if (dc > opt.max_step_capacity) {
      // split the current leading edge (from the last foot on the real line)
      const cx base(prev_foot, 0.0);
      pending.push_front(0.5 * (base + w1));
      continue;
    }
    pending.pop_front();
    const ElementarySlitMap g{w1.real(), h};
    for (cx& p : pending) p = g.erase(p);

    // preimage interval of the slit under the composed map so far
    if (!have_support) {
      enc.support_a = g.xi - g.h;
      enc.support_b = g.xi + g.h;
      have_support = true;
    } else {
      auto push_real = [&g](double x) {
        const double u = x - g.xi;
        const double s = std::sqrt(u * u + g.h * g.h);
        return g.xi + (u >= 0 ? s : -s);
      };
      enc.support_a = std::min(push_real(enc.support_a), g.xi - g.h);
      enc.support_b = std::max(push_real(enc.support_b), g.xi + g.h);
    }

    enc.maps.push_back(g);
    enc.capacity.increments.push_back(dc);
    t += dc;
    times.push_back(t);
    kappa_vals.push_back(g.xi);
    prev_foot = g.xi;
  }
  enc.capacity.total = t;
  enc.kappa = DrivingFunction::chordal(std::move(times), std::move(kappa_vals));
  return enc;
}

std::pair<DrivingFunction, CapacityRecord> encode_slit(const SlitPolyline& slit,
                                                       const ZipperOptions& opt) {
  EncodedSlit enc = encode_slit_full(slit, opt);
  return {std::move(enc.kappa), std::move(enc.capacity)};
}

std::complex<double> EncodedSlit::map(cx z) const {
  cx w = z;
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) w = it->build(w);
  return w;
}

double EncodedSlit::map_real(double x) const {
  double w = x;
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) w = it->build_real(w);
  return w;
}

std::pair<std::complex<double>, std::complex<double>> EncodedSlit::map_with_deriv(
    cx z) const {
  cx w = z, d{1.0, 0.0};
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
    d *= it->build_deriv(w);
    w = it->build(w);
  }
  return {w, d};
}

double EncodedSlit::deriv_real(double x) const {
  double w = x, d = 1.0;
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
    const double u = w - it->xi;
    if (std::abs(u) <= it->h)
      throw DomainError("elementary map: real point inside the swallowed interval");
    const double s = std::sqrt(u * u - it->h * it->h);
    d *= u / ((u > 0 ? 1.0 : -1.0) * s);
    w = it->xi + (u > 0 ? 1.0 : -1.0) * s;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Decoding

DecodedTrace decode_driving(const DrivingFunction& kappa, const CapacityRecord& capacity,
                            const ZipperOptions& opt) {
  if (kappa.mode() != DrivingMode::ChordalReal)
    throw StructureError("decode_driving: chordal driving function required");
  if (capacity.total <= 0.0) throw StructureError("decode_driving: capacity must be positive");

  // capacity grid: recorded increments, or equal steps under the cap
  std::vector<double> incr = capacity.increments;
  if (incr.empty()) {
    const int n = std::max(1, static_cast<int>(std::ceil(capacity.total / opt.max_step_capacity)));
    incr.assign(static_cast<std::size_t>(n), capacity.total / n);
  }

  std::vector<ElementarySlitMap> maps;
  maps.reserve(incr.size());
  std::vector<cx> tips;
  tips.reserve(incr.size() + 1);
  tips.emplace_back(kappa.value_at(0.0), 0.0);

  double t = 0.0;
  for (double dc : incr) {
    t += dc;
    const ElementarySlitMap g{kappa.value_at(t), std::sqrt(2.0 * dc)};
    cx tip(g.xi, g.h);
    for (auto it = maps.rbegin(); it != maps.rend(); ++it) tip = it->build(tip);
    tips.push_back(tip);
    maps.push_back(g);
  }

  // the trace may legitimately self-intersect (continuity of kappa does not
  // guarantee a slit), so build without validation and test afterwards
  SlitPolyline trace(std::move(tips), false);
  DecodedTrace out{std::move(trace), true, std::nullopt};
  if (!out.trace.is_simple()) {
    out.simple = false;
    const auto& v = out.trace.vertices();
    for (std::size_t i = 0; i + 1 < v.size() && !out.first_intersection_time; ++i)
      for (std::size_t j = i + 2; j + 1 < v.size(); ++j)
        if (segments_intersect(v[i], v[i + 1], v[j], v[j + 1])) {
          double tt = 0.0;
          for (std::size_t k = 0; k < j && k < incr.size(); ++k) tt += incr[k];
          out.first_intersection_time = tt;
          break;
        }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Slit -> measure

Measure slit_to_measure(const SlitPolyline& slit, const SlitMeasureOptions& opt) {
  const EncodedSlit enc = encode_slit_full(slit, opt.zipper);
  const double a = enc.support_a, b = enc.support_b;
  const double C = slit.base();
  const std::vector<double> eps =
      opt.eps_schedule.empty() ? std::vector<double>{1e-2, 5e-3, 2.5e-3} : opt.eps_schedule;

  // density on first-kind Chebyshev nodes of [a,b]
  const int m = opt.grid_n;
  std::vector<double> nodes(static_cast<std::size_t>(m));
  const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
  for (int i = 0; i < m; ++i)
    nodes[static_cast<std::size_t>(i)] = mid - rad * std::cos(M_PI * (i + 0.5) / m);

  auto g_eval = [&enc](cx z) { return 1.0 / enc.map(z); };
  InversionOptions iopt;
  iopt.order = 2;
  const InversionResult inv = stieltjes_invert(g_eval, nodes, eps, iopt);

  std::vector<double> dens(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    dens[static_cast<std::size_t>(i)] = std::max(inv.points[static_cast<std::size_t>(i)].density, 0.0);

  std::vector<Atom> atoms;
  if (std::abs(C) > opt.zipper.zero_base_tol) {
    // the atom sits at the real zero of F, on the side fixed by the sign of C
    double lo, hi;
    const double span0 = std::max(1.0, b - a);
    if (C > 0) {
      hi = a - 1e-9 * span0;
      lo = a - span0;
      while (enc.map_real(lo) > 0.0) {
        lo -= span0;
        if (lo < a - 64.0 * span0) throw ConvergenceError("slit_to_measure: no bracket for the atom");
      }
    } else {
      lo = b + 1e-9 * span0;
      hi = b + span0;
      while (enc.map_real(hi) < 0.0) {
        hi += span0;
        if (hi > b + 64.0 * span0) throw ConvergenceError("slit_to_measure: no bracket for the atom");
      }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid_x = 0.5 * (lo + hi);
      if (enc.map_real(mid_x) < 0.0)
        lo = mid_x;
      else
        hi = mid_x;
    }
    const double x0 = 0.5 * (lo + hi);
    const double weight = 1.0 / enc.deriv_real(x0);
    atoms.push_back({x0, weight});
  }

  Measure out(std::move(atoms),
              {DensitySegment(a, b, std::move(dens), NodeLayout::ChebyshevAngles)},
              "slit measure (capacity " + std::to_string(enc.capacity.total) + ")");
  out.mass_tolerance = opt.mass_tolerance;
  out.validate_probability();
  return out;
}

// ---------------------------------------------------------------------------
// Cayley pair

std::complex<double> cayley(cx z, CayleyDirection direction) {
  const cx i(0.0, 1.0);
  if (direction == CayleyDirection::DiscToHalfPlane) {
    if (std::abs(z - 1.0) < 1e-15) throw DomainError("cayley: pole at z=1");
    return i * (1.0 + z) / (1.0 - z);
  }
  if (std::abs(z + i) < 1e-15) throw DomainError("cayley: pole at w=-i");
  return (z - i) / (z + i);
}

}  // namespace slitmap
