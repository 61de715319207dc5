#include "slitmap/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slitmap/cauchy.hpp"
#include "slitmap/errors.hpp"

namespace slitmap {

namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Simpson for a plain double integrand.
double simpson_adaptive(const std::function<double(double)>& f, double a, double b,
                        double tol, int depth = 0) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  struct Rec {
    const std::function<double(double)>& f;
    double operator()(double a, double m, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth) const {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (std::abs(delta) <= 15.0 * tol || depth > 40) return left + right + delta / 15.0;
      return (*this)(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
             (*this)(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
  } rec{f};
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, m, b, fa, fm, fb, whole, tol, depth);
}

// Exact integral of the linear interpolant against 1/(x-t) over [t0,t1],
// for real x outside the open cell.
double cell_integral_real(double x, double t0, double t1, double d0, double d1) {
  const double beta = (d1 - d0) / (t1 - t0);
  const double alpha = d0 - beta * t0;
  return (alpha + beta * x) * std::log((x - t0) / (x - t1)) - beta * (t1 - t0);
}

// int_{[lo,hi] \ (x-eps, x+eps)} d(t)/(x-t) dt for one segment.
double segment_pv(const DensitySegment& seg, double x, double eps) {
  const double a = seg.a(), b = seg.b();
  const double wl = x - eps, wr = x + eps;  // excluded window

  if (seg.has_closed_form()) {
    double total = 0.0;
    const double tol = 1e-12;
    if (x > a && x < b) {
      const double s_max = std::min(x - a, b - x);
      if (s_max > eps) {
        // paired part: [d(x-s) - d(x+s)] / s over eps < s < s_max
        auto paired = [&seg, x](double s) { return (seg.value(x - s) - seg.value(x + s)) / s; };
        total += simpson_adaptive(paired, eps, s_max, tol);
        // one-sided leftover beyond the paired reach
        if (x - a < b - x)
          total += simpson_adaptive([&seg, x](double t) { return seg.value(t) / (x - t); },
                                    x + s_max, b, tol);
        else
          total += simpson_adaptive([&seg, x](double t) { return seg.value(t) / (x - t); },
                                    a, x - s_max, tol);
        return total;
      }
    }
    // window reaches an edge, or x outside [a,b]: integrate the clipped parts
    if (wl > a)
      total += simpson_adaptive([&seg, x](double t) { return seg.value(t) / (x - t); }, a,
                                std::min(wl, b), tol);
    if (wr < b)
      total += simpson_adaptive([&seg, x](double t) { return seg.value(t) / (x - t); },
                                std::max(wr, a), b, tol);
    return total;
  }

  // sampled: cell-exact on the node grid, cells split at the window edges
  const std::vector<double>& nodes = seg.nodes();
  std::vector<double> t(nodes);
  if (nodes.front() > a) t.insert(t.begin(), a);
  if (nodes.back() < b) t.push_back(b);
  if (wl > a && wl < b) t.push_back(wl);
  if (wr > a && wr < b) t.push_back(wr);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end(),
                      [](double p, double q) { return std::abs(p - q) < 1e-15; }),
          t.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double mid = 0.5 * (t[i] + t[i + 1]);
    if (mid > wl && mid < wr) continue;  // excluded window
    total += cell_integral_real(x, t[i], t[i + 1], seg.value(t[i]), seg.value(t[i + 1]));
  }
  return total;
}

}  // namespace

HilbertWindow hilbert_pv_detailed(const Measure& mu, double x, double eps) {
  if (!(eps > 0.0)) throw StructureError("hilbert_pv: eps must be positive");
  HilbertWindow out;
  double sum = 0.0;
  for (const Atom& a : mu.atoms()) {
    if (std::abs(x - a.position) > eps) {
      sum += a.weight / (x - a.position);
    } else {
      out.atom_in_window = true;
      out.excluded_mass += a.weight;
    }
  }
  for (const DensitySegment& s : mu.segments()) sum += segment_pv(s, x, eps);
  out.value = sum / kPi;
  return out;
}

double hilbert_pv(const Measure& mu, double x, double eps) {
  return hilbert_pv_detailed(mu, x, eps).value;
}

double hilbert_radial(const Measure& mu, double x, double eps) {
  if (!(eps > 0.0)) throw StructureError("hilbert_radial: eps must be positive");
  return cauchy_transform(mu, {x, eps}).real() / kPi;
}

PlemeljReport verify_plemelj(const Measure& mu, double x,
                             std::span<const double> eps_schedule, double tolerance) {
  if (eps_schedule.size() < 2)
    throw StructureError("verify_plemelj: need at least two eps values");
  PlemeljReport rep;
  rep.eps.assign(eps_schedule.begin(), eps_schedule.end());

  bool atom_near = false;
  const double radius = eps_schedule.front();
  for (const Atom& a : mu.atoms())
    if (std::abs(a.position - x) <= radius) atom_near = true;

  for (double e : eps_schedule) {
    rep.pv_values.push_back(hilbert_pv(mu, x, e));
    rep.radial_values.push_back(hilbert_radial(mu, x, e));
  }
  const int order = std::min<int>(2, static_cast<int>(eps_schedule.size()) - 1);
  rep.pv_limit = extrapolate_to_zero(eps_schedule, rep.pv_values, order);
  rep.radial_limit = extrapolate_to_zero(eps_schedule, rep.radial_values, order);
  rep.difference = std::abs(rep.pv_limit.limit - rep.radial_limit.limit);

  if (atom_near) {
    rep.verdict = PlemeljVerdict::HypothesisViolation;
    rep.note = "atom within max(eps) of x: the lemma assumes an absolutely "
               "continuous measure near x, equality is not guaranteed";
    return rep;
  }
  rep.verdict = rep.difference <= tolerance ? PlemeljVerdict::Pass : PlemeljVerdict::Fail;
  rep.note = rep.verdict == PlemeljVerdict::Pass ? "limits agree within tolerance"
                                                 : "extrapolated limits disagree";
  return rep;
}

}  // namespace slitmap
