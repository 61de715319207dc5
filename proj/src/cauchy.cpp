#include "slitmap/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slitmap/errors.hpp"

namespace slitmap {

namespace {

constexpr double kPi = std::numbers::pi;
using cx = std::complex<double>;

// Exact integral of the linear interpolant through (t0,d0), (t1,d1) against
// 1/(z-t):  (alpha + beta z) log((z-t0)/(z-t1)) - beta (t1-t0)
// with d(t) = alpha + beta t.  Valid for z off [t0,t1]; for Im z != 0 the
// principal log is the right branch because both z-t0 and z-t1 lie in the
// same half-plane.
cx cell_integral(cx z, double t0, double t1, double d0, double d1) {
  const double beta = (d1 - d0) / (t1 - t0);
  const double alpha = d0 - beta * t0;
  return (alpha + beta * z) * std::log((z - t0) / (z - t1)) - beta * (t1 - t0);
}

// Nodes of a segment, augmented for the cell-exact rule: peak refinement
// around x_center when z is close to the axis, and geometric chains toward
// the endpoints so that integrable blow-ups (arcsine-type densities) are
// resolved.  Both require a closed form; sampled segments carry no extra
// information between their nodes, so their stored grid is used as is with
// a clamped linear extension into the outer half-cells.
void refined_cells(const DensitySegment& seg, double x_center, double scale,
                   std::vector<double>& t, std::vector<double>& d) {
  const std::vector<double>& nodes = seg.nodes();
  const double len = seg.length();
  t.clear();
  d.clear();
  t.reserve(nodes.size() + 128);
  t.insert(t.end(), nodes.begin(), nodes.end());

  if (seg.has_closed_form()) {
    // geometric approach to both endpoints, halving down to ~1e-12 * len
    for (double s = 0.125 * len; s > 1e-12 * len; s *= 0.5) {
      t.push_back(seg.a() + s);
      t.push_back(seg.b() - s);
    }
    if (scale > 0.0) {
      const double lo = std::max(seg.a() + 1e-12 * len, x_center - 40.0 * scale);
      const double hi = std::min(seg.b() - 1e-12 * len, x_center + 40.0 * scale);
      if (lo < hi) {
        const double step = std::max(scale / 6.0, (hi - lo) / 2048.0);
        for (double x = lo; x <= hi; x += step) t.push_back(x);
      }
    }
  } else {
    if (nodes.front() > seg.a()) t.push_back(seg.a());
    if (nodes.back() < seg.b()) t.push_back(seg.b());
  }

  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-15; }),
          t.end());
  d.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    double v = seg.value(t[i]);
    if (!std::isfinite(v)) v = 0.0;  // only possible at a blow-up endpoint
    d[i] = v;
  }

  if (seg.has_closed_form()) {
    // close the 1e-12-wide slivers at the ends with flat cells
    if (t.front() > seg.a()) { t.insert(t.begin(), seg.a()); d.insert(d.begin(), d.front()); }
    if (t.back() < seg.b()) { t.push_back(seg.b()); d.push_back(d.back()); }
  }
}

cx segment_cauchy(const DensitySegment& seg, cx z) {
  const double dist_re = (z.real() < seg.a())   ? seg.a() - z.real()
                         : (z.real() > seg.b()) ? z.real() - seg.b()
                                                : 0.0;
  const double dist = std::hypot(dist_re, z.imag());
  std::vector<double> t, d;
  const double refine_scale = dist < 0.25 * seg.length() ? dist : 0.0;
  refined_cells(seg, z.real(), refine_scale, t, d);
  cx total{};
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    total += cell_integral(z, t[i], t[i + 1], d[i], d[i + 1]);
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// TransformGrid / Pick-Nevanlinna

TransformGrid::TransformGrid(std::vector<cx> points, std::vector<cx> values,
                             TransformKind kind)
    : points_(std::move(points)), values_(std::move(values)), kind_(kind) {
  if (points_.size() != values_.size())
    throw StructureError("transform grid: point/value size mismatch");
  for (const cx& p : points_) {
    if (kind_ == TransformKind::Caratheodory) {
      if (!(std::abs(p) < 1.0))
        throw StructureError("transform grid: Caratheodory points must satisfy |z|<1");
    } else if (!(p.imag() > 0.0)) {
      throw StructureError("transform grid: half-plane points must satisfy Im z>0");
    }
  }
}

std::complex<double> evaluate_pick_nevanlinna(const PickNevanlinna& pn, cx z) {
  // (1+tz)/(t-z) = z - (1+z^2)/(z-t), so the integral reduces to a Cauchy
  // transform of rho.
  const double mass = pn.rho.total_mass();
  return z + pn.b + z * mass - (1.0 + z * z) * cauchy_transform(pn.rho, z);
}

// ---------------------------------------------------------------------------
// Cauchy / F transforms

std::complex<double> cauchy_transform(const Measure& mu, cx z, const CauchyOptions& opt) {
  if (mu.support_distance(z) < opt.proximity_tol)
    throw ProximityError("cauchy_transform: z within tolerance of the support");
  cx g{};
  for (const Atom& a : mu.atoms()) g += a.weight / (z - a.position);
  for (const DensitySegment& s : mu.segments()) g += segment_cauchy(s, z);
  return g;
}

std::complex<double> f_transform(const Measure& mu, cx z, const CauchyOptions& opt) {
  const cx g = cauchy_transform(mu, z, opt);
  if (std::abs(g) < 1e-14)
    throw ProximityError("f_transform: G_mu vanishes within tolerance at z");
  return 1.0 / g;
}

std::complex<double> herglotz_caratheodory(const CircleMeasure& mu, cx z) {
  if (!(std::abs(z) < 1.0))
    throw DomainError("herglotz_caratheodory: |z| must be < 1");
  mu.validate_probability();
  return mu.integrate([z](double theta) {
    const cx u = std::polar(1.0, theta);
    return (u + z) / (u - z);
  });
}

// ---------------------------------------------------------------------------
// Stieltjes-Perron inversion

namespace {

struct ColumnData {
  std::vector<cx> g;  // G(x + i eps_k)
};

InversionResult invert_core(const std::function<cx(double, double)>& eval,
                            std::span<const double> x_grid,
                            std::span<const double> eps, const InversionOptions& opt,
                            bool allow_refine) {
  const std::size_t n = x_grid.size(), m = eps.size();
  if (m < 2) throw StructureError("stieltjes_invert: need at least two eps values");
  for (std::size_t k = 0; k + 1 < m; ++k)
    if (!(eps[k] > eps[k + 1]) || !(eps[k + 1] > 0.0))
      throw StructureError("stieltjes_invert: eps schedule must be strictly decreasing, positive");

  InversionResult out;
  out.points.resize(n);
  std::vector<ColumnData> cols(n);
  std::vector<double> dens_seq(m);

  for (std::size_t i = 0; i < n; ++i) {
    cols[i].g.resize(m);
    for (std::size_t k = 0; k < m; ++k) cols[i].g[k] = eval(x_grid[i], eps[k]);
    for (std::size_t k = 0; k < m; ++k) dens_seq[k] = -cols[i].g[k].imag() / kPi;
    const Extrapolated d = extrapolate_to_zero(eps, dens_seq, opt.order);
    InversionPoint& p = out.points[i];
    p.x = x_grid[i];
    p.density = d.limit;
    p.error_estimate = d.error_estimate;
    p.converged = d.error_estimate <=
                  std::max(opt.converged_abs, opt.converged_rel * std::abs(d.limit));
  }

  // Atom sweep.  Seeds are local maxima of -Im G at the largest eps (the
  // widest Poisson kernel, so an atom between grid nodes still lights up its
  // neighbours).  Each seed is peak-refined at the smallest eps and then
  // confirmed by two tests at the refined position: the extrapolated limit of
  // -eps*Im G must exceed the threshold, and |Im G| must grow like 1/eps
  // under halving (a density stays flat, an integrable endpoint blow-up grows
  // at most like 1/sqrt(eps)).
  std::vector<double> peak(n);
  for (std::size_t i = 0; i < n; ++i) peak[i] = -cols[i].g[0].imag();
  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < n; ++i) {
    const bool up_left = i == 0 || peak[i] >= peak[i - 1];
    const bool up_right = i + 1 == n || peak[i] >= peak[i + 1];
    if (up_left && up_right && eps[0] * peak[i] >= opt.atom_threshold) seeds.push_back(i);
  }

  const double ratio_step = eps[m - 2] / eps[m - 1];
  const double pole_grow = opt.pole_ratio * (ratio_step / 2.0);
  std::vector<double> w_seq(m);

  std::size_t s = 0;
  while (s < seeds.size()) {
    std::size_t e = s;
    while (e + 1 < seeds.size() && seeds[e + 1] == seeds[e] + 1) ++e;
    std::size_t best = seeds[s];
    for (std::size_t j = s; j <= e; ++j)
      if (peak[seeds[j]] > peak[best]) best = seeds[j];
    s = e + 1;

    double pos = x_grid[best];
    const double emin = eps[m - 1];
    if (allow_refine && opt.refine_atoms) {
      const double span_l = best > 0 ? x_grid[best] - x_grid[best - 1] : 4.0 * emin;
      const double span_r = best + 1 < n ? x_grid[best + 1] - x_grid[best] : 4.0 * emin;
      double lo = pos - std::max(span_l, 4.0 * emin);
      double hi = pos + std::max(span_r, 4.0 * emin);
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      auto fneg = [&](double x) { return eval(x, emin).imag(); };  // minimize Im G
      double c = hi - gr * (hi - lo), dd = lo + gr * (hi - lo);
      double fc = fneg(c), fd = fneg(dd);
      while (hi - lo > 1e-13 * std::max(1.0, std::abs(pos))) {
        if (fc < fd) {
          hi = dd; dd = c; fd = fc;
          c = hi - gr * (hi - lo); fc = fneg(c);
        } else {
          lo = c; c = dd; fc = fd;
          dd = lo + gr * (hi - lo); fd = fneg(dd);
        }
      }
      pos = 0.5 * (lo + hi);
    }

    double im_last, im_prev;
    if (allow_refine) {
      im_last = eval(pos, eps[m - 1]).imag();
      im_prev = eval(pos, eps[m - 2]).imag();
      for (std::size_t k = 0; k < m; ++k) w_seq[k] = -eps[k] * eval(pos, eps[k]).imag();
    } else {
      im_last = cols[best].g[m - 1].imag();
      im_prev = cols[best].g[m - 2].imag();
      for (std::size_t k = 0; k < m; ++k) w_seq[k] = -eps[k] * cols[best].g[k].imag();
    }
    const double grow = std::abs(im_last) / std::max(std::abs(im_prev), 1e-300);
    const Extrapolated w = extrapolate_to_zero(eps, w_seq, static_cast<int>(m) - 1);
    if (w.limit > opt.atom_threshold && grow > pole_grow) {
      bool duplicate = false;
      for (const AtomCandidate& a : out.atoms)
        if (std::abs(a.position - pos) <= 1e-9 * std::max(1.0, std::abs(pos)))
          duplicate = true;
      if (!duplicate) out.atoms.push_back({pos, w.limit, w.error_estimate});
    }
  }
  return out;
}

}  // namespace

InversionResult stieltjes_invert(const TransformEvaluator& g,
                                 std::span<const double> x_grid,
                                 std::span<const double> eps_schedule,
                                 const InversionOptions& opt) {
  return invert_core([&g](double x, double e) { return g(cx(x, e)); }, x_grid,
                     eps_schedule, opt, true);
}

InversionResult stieltjes_invert(const Measure& mu, std::span<const double> x_grid,
                                 std::span<const double> eps_schedule,
                                 const InversionOptions& opt) {
  return invert_core(
      [&mu](double x, double e) { return cauchy_transform(mu, cx(x, e)); }, x_grid,
      eps_schedule, opt, true);
}

InversionResult stieltjes_invert(const TransformGrid& grid,
                                 std::span<const double> x_grid,
                                 std::span<const double> eps_schedule,
                                 const InversionOptions& opt) {
  if (grid.kind() != TransformKind::CauchyG)
    throw StructureError("stieltjes_invert: grid must hold Cauchy-transform values");
  const auto& pts = grid.points();
  const auto& vals = grid.values();
  auto lookup = [&](double x, double e) -> cx {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (std::abs(pts[i].real() - x) <= 1e-12 && std::abs(pts[i].imag() - e) <= 1e-12)
        return vals[i];
    throw StructureError("stieltjes_invert: required point missing from the grid");
  };
  return invert_core(lookup, x_grid, eps_schedule, opt, false);
}

// ---------------------------------------------------------------------------
// F-transform characterization check

FCheckReport check_f_transform(const TransformGrid& samples, const FCheckOptions& opt) {
  FCheckReport rep;
  if (samples.kind() == TransformKind::Caratheodory)
    throw StructureError("check_f_transform: expected a half-plane grid");

  const auto& pts = samples.points();
  const auto& vals = samples.values();

  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (vals[i].imag() < -opt.range_tol) {
      rep.verdict = FVerdict::Rejected;
      rep.reason = "range violation: Im F < 0 at a sample";
      rep.witness_point = pts[i];
      rep.witness_value = vals[i];
      return rep;
    }
  }

  // collect the ray z ~ iy
  std::vector<std::pair<double, cx>> ray;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (std::abs(pts[i].real()) <= 1e-9 * std::abs(pts[i]) && pts[i].imag() >= opt.ray_y_min)
      ray.emplace_back(pts[i].imag(), vals[i]);
  std::sort(ray.begin(), ray.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });

  if (static_cast<int>(ray.size()) < opt.min_ray_points) {
    rep.verdict = FVerdict::Inconclusive;
    rep.reason = "insufficient ray samples for the normalization limit";
    return rep;
  }
  for (const auto& [y, f] : ray)
    rep.ray_ratios.push_back(std::abs(f / cx(0.0, y) - 1.0));

  const double last = rep.ray_ratios.back();
  const double first = rep.ray_ratios.front();
  if (last > opt.ray_tol || last > first + opt.range_tol) {
    rep.verdict = FVerdict::Rejected;
    rep.reason = "normalization violation: F(iy)/(iy) does not tend to 1";
    rep.witness_point = cx(0.0, ray.back().first);
    rep.witness_value = ray.back().second;
    return rep;
  }
  rep.verdict = FVerdict::Plausible;
  rep.reason = "range and normalization consistent on the samples";
  return rep;
}

}  // namespace slitmap
