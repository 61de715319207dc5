#include "slitmap/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slitmap/errors.hpp"
#include "slitmap/extrapolate.hpp"

namespace slitmap {

namespace {

constexpr double kPi = std::numbers::pi;
using cx = std::complex<double>;

// Real boundary value of F_mu off the support (where G is real).
double f_real(const Measure& mu, double x) {
  double g = 0.0;
  for (const Atom& a : mu.atoms()) g += a.weight / (x - a.position);
  for (const DensitySegment& s : mu.segments())
    g += s.integrate([x](double t) { return 1.0 / (x - t); });
  if (std::abs(g) < 1e-300) throw ProximityError("f_real: G vanishes");
  return 1.0 / g;
}

bool on_support(const Measure& mu, double x, double pad) {
  for (const Atom& a : mu.atoms())
    if (std::abs(x - a.position) <= pad) return true;
  for (const DensitySegment& s : mu.segments())
    if (x >= s.a() - pad && x <= s.b() + pad) return true;
  return false;
}

}  // namespace

ConvolutionResult monotone_convolve(const Measure& mu, const Measure& nu,
                                    const MonotoneOptions& opt) {
  mu.validate_probability();
  nu.validate_probability();
  const std::vector<double> eps =
      opt.eps_schedule.empty() ? default_eps_schedule() : opt.eps_schedule;

  // Im F_nu(z) >= Im z for F-transforms, so the composition never brings the
  // evaluation closer to the real axis than the inversion line itself.
  auto composed_f = [&mu, &nu](cx z) { return f_transform(mu, f_transform(nu, z)); };
  auto composed_g = [&composed_f](cx z) { return 1.0 / composed_f(z); };

  const double a_lo = std::min(mu.support_min(), nu.support_min());
  const double b_hi = std::max(mu.support_max(), nu.support_max());
  const double spread = (mu.support_max() - mu.support_min()) +
                        (nu.support_max() - nu.support_min());
  const double w_lo = a_lo - spread - 2.0;
  const double w_hi = b_hi + spread + 2.0;

  // --- atoms: pole search on the real axis -------------------------------
  std::vector<Atom> atoms;
  {
    const int n = opt.pole_scan_n;
    const double pad = 1e-7 * (w_hi - w_lo);
    std::vector<double> xs, fs;
    xs.reserve(static_cast<std::size_t>(n));
    fs.reserve(static_cast<std::size_t>(n));
    auto zeros_target = [&](double x) -> std::optional<double> {
      if (on_support(nu, x, pad)) return std::nullopt;
      const double fn = f_real(nu, x);
      if (on_support(mu, fn, pad)) return std::nullopt;
      return f_real(mu, fn);
    };
    for (int i = 0; i < n; ++i) {
      const double x = w_lo + (w_hi - w_lo) * i / (n - 1);
      if (auto v = zeros_target(x)) {
        xs.push_back(x);
        fs.push_back(*v);
      }
    }
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (xs[i + 1] - xs[i] > 1.5 * (w_hi - w_lo) / (n - 1)) continue;  // support gap
      if (fs[i] == 0.0 || fs[i] * fs[i + 1] >= 0.0) continue;
      // A sign change of Phi = F_mu(F_nu(.)) can also be a pole crossing;
      // poles of Phi repel brackets because |Phi| grows there.
      if (std::abs(fs[i]) > 1e6 || std::abs(fs[i + 1]) > 1e6) continue;
      double lo = xs[i], hi = xs[i + 1];
      double flo = fs[i];
      bool ok = true;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto fm = zeros_target(mid);
        if (!fm) { ok = false; break; }
        if (*fm == 0.0) { lo = hi = mid; break; }
        if ((*fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = *fm;
        } else {
          hi = mid;
        }
      }
      if (!ok) continue;
      const double x0 = 0.5 * (lo + hi);
      const double step = 1e-7 * std::max(1.0, std::abs(x0));
      const auto fp = zeros_target(x0 + step);
      const auto fm = zeros_target(x0 - step);
      if (!fp || !fm) continue;
      const double deriv = (*fp - *fm) / (2.0 * step);
      if (deriv > 1e-12) {
        const double weight = 1.0 / deriv;
        if (weight > 1e-10) atoms.push_back({x0, weight});
      }
    }
  }

  // --- density: inversion on the window ----------------------------------
  std::vector<DensitySegment> segments;
  {
    const int n = opt.grid_n;
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      grid[static_cast<std::size_t>(i)] = w_lo + (w_hi - w_lo) * i / (n - 1);
    InversionOptions iopt;
    iopt.order = 2;
    iopt.refine_atoms = false;  // atoms come from the pole search
    const InversionResult inv = stieltjes_invert(composed_g, grid, eps, iopt);

    // contiguous runs of resolvable density become Cartesian segments
    std::size_t i = 0;
    while (i < inv.points.size()) {
      while (i < inv.points.size() && inv.points[i].density <= opt.density_floor) ++i;
      std::size_t j = i;
      while (j < inv.points.size() && inv.points[j].density > opt.density_floor) ++j;
      if (j - i >= 5) {
        std::vector<double> nodes, vals;
        nodes.reserve(j - i + 2);
        vals.reserve(j - i + 2);
        const double h = (w_hi - w_lo) / (n - 1);
        nodes.push_back(inv.points[i].x - h);
        vals.push_back(0.0);
        for (std::size_t k = i; k < j; ++k) {
          nodes.push_back(inv.points[k].x);
          vals.push_back(std::max(inv.points[k].density, 0.0));
        }
        nodes.push_back(inv.points[j - 1].x + h);
        vals.push_back(0.0);
        segments.emplace_back(nodes.front(), nodes.back(), std::move(nodes), std::move(vals));
      }
      i = j;
    }
  }

  // mass bookkeeping: the true result is a probability measure; the sampled
  // density carries the discretization deficit, so it is renormalized and the
  // factor recorded
  double atom_mass = 0.0;
  for (const Atom& a : atoms) atom_mass += a.weight;
  double dens_mass = 0.0;
  for (const DensitySegment& s : segments) dens_mass += s.mass();
  std::string label = "monotone convolution";
  if (!segments.empty() && dens_mass > 1e-12) {
    const double scale = (1.0 - atom_mass) / dens_mass;
    std::vector<DensitySegment> scaled;
    for (DensitySegment& s : segments) {
      std::vector<double> nodes = s.nodes(), vals = s.values();
      for (double& v : vals) v *= scale;
      scaled.emplace_back(s.a(), s.b(), std::move(nodes), std::move(vals));
    }
    segments = std::move(scaled);
    char buf[64];
    std::snprintf(buf, sizeof(buf), " [density renormalized by %.6g]", scale);
    label += buf;
  } else if (segments.empty() && std::abs(atom_mass - 1.0) > 1e-6) {
    throw ConvergenceError("monotone_convolve: atomic mass " + std::to_string(atom_mass) +
                           " does not account for the result");
  }

  ConvolutionResult out{Measure(std::move(atoms), std::move(segments), label), 0.0};
  out.measure.mass_tolerance = 1e-6;
  out.measure.validate_probability();

  // --- validation on held-out points -------------------------------------
  double residual = 0.0;
  const int nv = opt.validation_points;
  for (int i = 0; i < nv; ++i) {
    const double x = w_lo + (w_hi - w_lo) * (i + 0.37) / nv;
    const double y = 0.45 + 1.4 * ((i * 7919) % 97) / 96.0;  // deterministic spread
    const cx z(x, y);
    residual = std::max(residual, std::abs(f_transform(out.measure, z) - composed_f(z)));
  }
  out.residual = residual;
  return out;
}

// ---------------------------------------------------------------------------
// Univalence probe

namespace {

std::optional<cx> newton_solve(const TransformEvaluator& f, cx target, cx seed,
                               double tol) {
  cx z = seed;
  for (int it = 0; it < 60; ++it) {
    const cx fz = f(z) - target;
    if (std::abs(fz) < tol) return z;
    const double h = 1e-7 * std::max(1.0, std::abs(z));
    const cx d = (f(z + h) - f(z - h)) / (2.0 * h);
    if (std::abs(d) < 1e-14) return std::nullopt;
    z -= fz / d;
    if (!(z.imag() > 0.0)) return std::nullopt;  // stay in the half-plane
  }
  return std::nullopt;
}

UnivalenceDiagnostic probe_impl(const TransformGrid& grid,
                                const TransformEvaluator* evaluator,
                                const UnivalenceOptions& opt) {
  UnivalenceDiagnostic diag;
  diag.note = "sampled probe: absence of witnesses is not a univalence certificate";
  const auto& pts = grid.points();
  const auto& vals = grid.values();

  // --- collision screening -------------------------------------------------
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (std::abs(pts[i] - pts[j]) < opt.separation) continue;
      if (std::abs(vals[i] - vals[j]) > opt.grid_value_tol) continue;
      CollisionWitness w{pts[i], pts[j], vals[i], vals[j],
                         std::abs(vals[i] - vals[j]), std::abs(pts[i] - pts[j])};
      if (evaluator) {
        const cx target = 0.5 * (vals[i] + vals[j]);
        const auto z1 = newton_solve(*evaluator, target, pts[i], 1e-13);
        const auto z2 = newton_solve(*evaluator, target, pts[j], 1e-13);
        if (!z1 || !z2 || std::abs(*z1 - *z2) < opt.separation) continue;
        w.z1 = *z1;
        w.z2 = *z2;
        w.f1 = (*evaluator)(*z1);
        w.f2 = (*evaluator)(*z2);
        w.value_gap = std::abs(w.f1 - w.f2);
        w.point_gap = std::abs(*z1 - *z2);
        if (w.value_gap > opt.refined_tol) continue;
      }
      bool duplicate = false;
      for (const CollisionWitness& have : diag.collisions)
        if (std::abs(have.z1 - w.z1) < opt.separation &&
            std::abs(have.z2 - w.z2) < opt.separation)
          duplicate = true;
      if (!duplicate) diag.collisions.push_back(w);
    }
  }

  // --- winding counts on sub-rectangles -----------------------------------
  std::vector<double> xs, ys;
  for (const cx& p : pts) {
    xs.push_back(p.real());
    ys.push_back(p.imag());
  }
  auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            v.end());
  };
  uniq(xs);
  uniq(ys);
  if (xs.size() * ys.size() != pts.size() || xs.size() < 3 || ys.size() < 3) {
    diag.note += "; winding skipped (grid is not a rectangular lattice)";
    return diag;
  }
  auto value_at = [&](std::size_t ix, std::size_t iy) {
    const cx p(xs[ix], ys[iy]);
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (std::abs(pts[k] - p) < 1e-10) return vals[k];
    throw StructureError("univalence probe: lattice lookup failed");
  };

  const int sub = std::max(1, opt.subdivisions);
  for (int sx = 0; sx < sub; ++sx) {
    for (int sy = 0; sy < sub; ++sy) {
      const std::size_t x0 = sx * (xs.size() - 1) / sub;
      const std::size_t x1 = (sx + 1) * (xs.size() - 1) / sub;
      const std::size_t y0 = sy * (ys.size() - 1) / sub;
      const std::size_t y1 = (sy + 1) * (ys.size() - 1) / sub;
      if (x1 <= x0 + 1 || y1 <= y0 + 1) continue;

      WindingReport rep;
      rep.corner_lo = cx(xs[x0], ys[y0]);
      rep.corner_hi = cx(xs[x1], ys[y1]);
      const std::size_t cx_i = (x0 + x1) / 2, cy_i = (y0 + y1) / 2;
      rep.target = value_at(cx_i, cy_i);

      // boundary loop, counterclockwise
      std::vector<cx> loop;
      for (std::size_t i = x0; i <= x1; ++i) loop.push_back(value_at(i, y0));
      for (std::size_t j = y0 + 1; j <= y1; ++j) loop.push_back(value_at(x1, j));
      for (std::size_t i = x1; i-- > x0;) loop.push_back(value_at(i, y1));
      for (std::size_t j = y1; j-- > y0 + 1;) loop.push_back(value_at(x0, j));
      loop.push_back(loop.front());

      double total = 0.0;
      bool conclusive = true;
      for (std::size_t k = 0; k + 1 < loop.size(); ++k) {
        const cx u = loop[k] - rep.target;
        const cx v = loop[k + 1] - rep.target;
        if (std::abs(u) < opt.refined_tol || std::abs(v) < opt.refined_tol) {
          conclusive = false;
          break;
        }
        double dphi = std::arg(v / u);
        if (std::abs(dphi) > 0.5 * kPi) conclusive = false;  // undersampled boundary
        total += dphi;
      }
      rep.count = static_cast<int>(std::lround(total / (2.0 * kPi)));
      rep.conclusive =
          conclusive && std::abs(total / (2.0 * kPi) - rep.count) < 0.1;
      diag.windings.push_back(rep);
    }
  }
  return diag;
}

}  // namespace

UnivalenceDiagnostic univalence_probe(const TransformGrid& transform,
                                      const UnivalenceOptions& opt) {
  return probe_impl(transform, nullptr, opt);
}

UnivalenceDiagnostic univalence_probe(const TransformGrid& transform,
                                      const TransformEvaluator& evaluator,
                                      const UnivalenceOptions& opt) {
  return probe_impl(transform, &evaluator, opt);
}

}  // namespace slitmap
