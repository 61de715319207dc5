#include "slitmap/characterizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slitmap/cauchy.hpp"
#include "slitmap/errors.hpp"
#include "slitmap/extrapolate.hpp"
#include "slitmap/hilbert.hpp"

namespace slitmap {

namespace {

constexpr double kPi = std::numbers::pi;
using cx = std::complex<double>;

std::vector<double> schedule_or_default(const CharacterizerOptions& opt) {
  return opt.eps_schedule.empty() ? default_eps_schedule() : opt.eps_schedule;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d; d = c; fd = fc;
      c = hi - gr * (hi - lo); fc = f(c);
    } else {
      lo = c; c = d; fc = fd;
      d = lo + gr * (hi - lo); fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

// linear interpolation on the profile abscissas
double interp_profile(const std::vector<double>& xs, const std::vector<double>& vs,
                      double x) {
  if (x <= xs.front()) return vs.front();
  if (x >= xs.back()) return vs.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double t = (x - xs[j]) / (xs[j + 1] - xs[j]);
  return vs[j] * (1.0 - t) + vs[j + 1] * t;
}

struct BlowupProbe {
  bool d_blows = false;
  bool h_blows = false;
  double d_last = 0.0;
  double h_last = 0.0;
};

BlowupProbe probe_endpoint(const Measure& mu, const SupportProfile& prof, bool left,
                           const CharacterizerOptions& opt,
                           const std::vector<double>& eps) {
  const double len = prof.b - prof.a;
  BlowupProbe out;
  double dv[3], hv[3];
  for (int i = 0; i < 3; ++i) {
    const double delta = len * std::pow(10.0, -2.0 - i);
    const double x = left ? prof.a + delta : prof.b - delta;
    dv[i] = mu.density_value(x);
    std::vector<double> seq;
    for (double e : eps) seq.push_back(hilbert_radial(mu, x, e));
    hv[i] = std::abs(extrapolate_to_zero(eps, seq, 2).limit);
  }
  out.d_last = dv[2];
  out.h_last = hv[2];
  out.d_blows = dv[0] < dv[1] && dv[1] < dv[2] && dv[2] >= opt.blowup_floor &&
                dv[2] >= opt.blowup_ratio * dv[0];
  out.h_blows = hv[0] < hv[1] && hv[1] < hv[2] && hv[2] >= opt.blowup_floor &&
                hv[2] >= opt.blowup_ratio * hv[0];
  return out;
}

}  // namespace

const ClauseReport* SlitVerdict::clause(const std::string& name) const {
  for (const ClauseReport& c : clauses)
    if (c.name == name) return &c;
  return nullptr;
}

double WeldingMap::h(double x) const {
  if (samples.empty()) throw StructureError("welding map: no samples");
  if (x <= samples.front().first) return samples.front().second;
  if (x >= samples.back().first) return samples.back().second;
  const auto it = std::upper_bound(samples.begin(), samples.end(), x,
                                   [](double v, const auto& s) { return v < s.first; });
  const std::size_t j = static_cast<std::size_t>(it - samples.begin()) - 1;
  const auto& [x0, y0] = samples[j];
  const auto& [x1, y1] = samples[j + 1];
  const double t = (x - x0) / (x1 - x0);
  return y0 * (1.0 - t) + y1 * t;
}

// ---------------------------------------------------------------------------
// Profile

SupportProfile build_profile(const Measure& mu, const CharacterizerOptions& opt) {
  const auto& segs = mu.segments();
  if (segs.empty())
    throw StructureError("support profile: measure has no density interval");
  for (std::size_t i = 0; i + 1 < segs.size(); ++i)
    if (std::abs(segs[i].b() - segs[i + 1].a()) > 1e-9 * (segs.back().b() - segs.front().a()))
      throw StructureError("support profile: density support is not one compact interval");

  SupportProfile prof;
  prof.a = segs.front().a();
  prof.b = segs.back().b();

  if (mu.atoms().size() > 1)
    throw StructureError("support profile: more than one atom");
  if (!mu.atoms().empty()) {
    const Atom& at = mu.atoms().front();
    if (at.position >= prof.a - 1e-12 && at.position <= prof.b + 1e-12)
      throw StructureError("support profile: atom inside the density interval");
    prof.atom = at;
  }

  const std::vector<double> eps = schedule_or_default(opt);
  const int m = opt.grid_n;
  prof.x.resize(static_cast<std::size_t>(m));
  prof.d.resize(static_cast<std::size_t>(m));
  prof.H.resize(static_cast<std::size_t>(m));
  prof.H_err.resize(static_cast<std::size_t>(m));
  const double mid = 0.5 * (prof.a + prof.b), rad = 0.5 * (prof.b - prof.a);
  std::vector<double> seq(eps.size());
  for (int i = 0; i < m; ++i) {
    const double x = mid - rad * std::cos(kPi * (i + 0.5) / m);
    prof.x[static_cast<std::size_t>(i)] = x;
    prof.d[static_cast<std::size_t>(i)] = mu.density_value(x);
    for (std::size_t k = 0; k < eps.size(); ++k) seq[k] = hilbert_radial(mu, x, eps[k]);
    const Extrapolated e = extrapolate_to_zero(eps, seq, 2);
    prof.H[static_cast<std::size_t>(i)] = e.limit;
    prof.H_err[static_cast<std::size_t>(i)] = e.error_estimate;
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Welding

namespace {

WeldingMap extract_welding_from_profile(const Measure& mu, const SupportProfile& prof,
                                        bool zero_c, const CharacterizerOptions& opt) {
  const std::size_t m = prof.x.size();
  const double len = prof.b - prof.a;

  // curve with endpoint anchors; gamma(a) = gamma(b) = C (or 0)
  std::vector<double> X;
  std::vector<cx> G;
  X.reserve(m + 2);
  G.reserve(m + 2);
  X.push_back(prof.a);
  G.push_back(zero_c ? cx{} : cx(1.0 / (kPi * prof.H.front()), 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    X.push_back(prof.x[i]);
    G.push_back(1.0 / (kPi * cx(prof.H[i], -prof.d[i])));
  }
  X.push_back(prof.b);
  G.push_back(zero_c ? cx{} : cx(1.0 / (kPi * prof.H.back()), 0.0));

  // cumulative chord length
  std::vector<double> s(X.size(), 0.0);
  for (std::size_t i = 1; i < X.size(); ++i) s[i] = s[i - 1] + std::abs(G[i] - G[i - 1]);
  const double total = s.back();
  if (!(total > 0.0)) throw StructureError("welding: degenerate curve");

  // two-pointer sweep: equal curve length from the two endpoints brackets the
  // partner, a local lexicographic (|delta d|, |delta H|) match refines it
  WeldingMap map;
  map.a = prof.a;
  map.b = prof.b;
  map.samples.emplace_back(prof.a, prof.b);
  double residual_max = 0.0;
  double first_bad_x = prof.a;
  double first_bad_res = -1.0;

  std::size_t jr = X.size() - 1;  // right pointer on the cumulative array
  for (std::size_t i = 0; i < m; ++i) {
    const double target = total - s[i + 1];
    while (jr > 0 && s[jr - 1] >= target) --jr;
    // bracket [X[jr-1], X[jr]] holds the partner; interpolate in length
    const std::size_t j0 = jr > 0 ? jr - 1 : 0;
    double y;
    if (s[jr] == s[j0])
      y = X[jr];
    else {
      const double t = (target - s[j0]) / (s[jr] - s[j0]);
      y = X[j0] * (1.0 - t) + X[jr] * t;
    }

    const double di = prof.d[i];
    const double Hi = prof.H[i];
    const double cell = std::max(X[std::min(jr + 1, X.size() - 1)] - X[j0], 1e-12 * len);
    const double lo = std::max(prof.a, y - cell);
    const double hi = std::min(prof.b, y + cell);
    auto mismatch = [&](double yy) {
      const double dd = mu.density_value(yy);
      const double hh = interp_profile(prof.x, prof.H, yy);
      return 1e3 * std::abs(dd - di) + std::abs(hh - Hi);
    };
    if (hi > lo) y = golden_min(mismatch, lo, hi, 1e-12 * len);

    const double res =
        std::abs(mu.density_value(y) - di) + std::abs(interp_profile(prof.x, prof.H, y) - Hi);
    // residual is judged away from the endpoint zones, where blow-ups and
    // anchor effects dominate the samples
    const double margin = 0.03 * len;
    if (std::min(prof.x[i] - prof.a, prof.b - prof.x[i]) > margin &&
        std::min(y - prof.a, prof.b - y) > margin) {
      if (res > residual_max) residual_max = res;
      if (first_bad_res < 0.0 && res > opt.welding_residual_tol) {
        first_bad_res = res;
        first_bad_x = prof.x[i];
      }
    }
    map.samples.emplace_back(prof.x[i], y);
  }
  map.samples.emplace_back(prof.b, prof.a);
  map.max_residual = residual_max;

  if (first_bad_res > 0.0)
    throw NoWeldingError("welding: (d, H) profile mismatch at x=" +
                             std::to_string(first_bad_x) +
                             " (residual " + std::to_string(first_bad_res) + ")",
                         first_bad_x, first_bad_res);

  // enforce a decreasing graph; a violation beyond one cell is a mismatch
  for (std::size_t i = 1; i < map.samples.size(); ++i) {
    const double prev = map.samples[i - 1].second;
    if (map.samples[i].second > prev) {
      if (map.samples[i].second - prev > 4.0 * len / static_cast<double>(m))
        throw NoWeldingError("welding: non-monotone pair profile at x=" +
                                 std::to_string(map.samples[i].first),
                             map.samples[i].first,
                             map.samples[i].second - prev);
      map.samples[i].second = prev;
    }
  }

  // fixed point of h by bisection on h(x) - x (h decreasing: unique crossing)
  double lo = prof.a, hi = prof.b;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, len); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (map.h(mid) - mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  map.fixed_point = 0.5 * (lo + hi);
  return map;
}

}  // namespace

WeldingMap extract_welding(const Measure& mu, const CharacterizerOptions& opt) {
  const SupportProfile prof = build_profile(mu, opt);
  return extract_welding_from_profile(mu, prof, !prof.atom.has_value(), opt);
}

// ---------------------------------------------------------------------------
// Condition checker

SlitVerdict check_slit_conditions(const Measure& mu, const CharacterizerOptions& opt) {
  SlitVerdict verdict;

  if (mu.segments().empty()) {
    verdict.kind = SlitCase::Rejected;
    verdict.clauses.push_back(
        {"support", false, 0.0, "no density interval: support cannot spell a slit"});
    return verdict;
  }

  const SupportProfile prof = build_profile(mu, opt);
  const std::vector<double> eps = schedule_or_default(opt);
  const double len = prof.b - prof.a;
  const bool atom_case = prof.atom.has_value();
  bool all_pass = true;
  auto add = [&verdict, &all_pass](std::string name, bool pass, double evidence,
                                   std::string detail) {
    verdict.clauses.push_back({std::move(name), pass, evidence, std::move(detail)});
    all_pass = all_pass && pass;
  };

  // interior positivity and continuity of d (inner 94% of the grid)
  const std::size_t m = prof.x.size();
  const std::size_t lo_i = m / 32, hi_i = m - m / 32;
  double d_min = std::numeric_limits<double>::infinity();
  double d_jump = 0.0, d_range = 0.0;
  for (std::size_t i = lo_i; i < hi_i; ++i) {
    d_min = std::min(d_min, prof.d[i]);
    d_range = std::max(d_range, prof.d[i]);
    if (i > lo_i) d_jump = std::max(d_jump, std::abs(prof.d[i] - prof.d[i - 1]));
  }
  const double d_modulus =
      opt.continuity_modulus > 0.0 ? opt.continuity_modulus : 0.1 * d_range + 1e-3;
  add("density-positive", d_min > 0.0, d_min,
      "min of d over the interior grid");
  add("density-continuous", d_jump <= d_modulus, d_jump,
      "max adjacent jump vs declared modulus " + std::to_string(d_modulus));

  // continuity of H on the interior grid
  double h_jump = 0.0, h_range = 0.0, h_min = 0.0, h_max = 0.0;
  for (std::size_t i = lo_i; i < hi_i; ++i) {
    h_range = std::max(h_range, std::abs(prof.H[i]));
    h_min = std::min(h_min, prof.H[i]);
    h_max = std::max(h_max, prof.H[i]);
    if (i > lo_i) h_jump = std::max(h_jump, std::abs(prof.H[i] - prof.H[i - 1]));
  }
  const double h_modulus =
      opt.continuity_modulus > 0.0 ? opt.continuity_modulus : 0.1 * h_range + 1e-3;
  add("hilbert-continuous", h_jump <= h_modulus, h_jump,
      "max adjacent jump vs declared modulus " + std::to_string(h_modulus));

  if (atom_case) {
    verdict.kind = SlitCase::NonzeroC;

    const double da = mu.density_value(prof.a + 1e-9 * len);
    const double db = mu.density_value(prof.b - 1e-9 * len);
    add("density-endpoint-zero",
        da <= opt.endpoint_zero_tol && db <= opt.endpoint_zero_tol, std::max(da, db),
        "d(a), d(b) against tolerance " + std::to_string(opt.endpoint_zero_tol));

    // H(a) = H(b) = 1/(pi C) defines C
    std::vector<double> seq(eps.size());
    auto h_at = [&](double x) {
      for (std::size_t k = 0; k < eps.size(); ++k) seq[k] = hilbert_radial(mu, x, eps[k]);
      return extrapolate_to_zero(eps, seq, 2).limit;
    };
    const double Ha = h_at(prof.a), Hb = h_at(prof.b);
    const bool h_ends_equal = std::abs(Ha - Hb) <= opt.h_endpoint_tol &&
                              std::abs(Ha) > 1e-9;
    add("hilbert-endpoints-equal", h_ends_equal, std::abs(Ha - Hb),
        "|H(a) - H(b)|, H(a)=" + std::to_string(Ha));
    if (h_ends_equal) verdict.C = 2.0 / (kPi * (Ha + Hb));

    const Atom& at = *prof.atom;
    const bool side_ok = verdict.C > 0.0 ? at.position < prof.a : at.position > prof.b;
    add("atom-side", h_ends_equal && side_ok, at.position,
        "x0 < a iff C > 0 (C = " + std::to_string(verdict.C) + ")");
  } else {
    verdict.kind = SlitCase::ZeroC;
    verdict.C = 0.0;

    const BlowupProbe left = probe_endpoint(mu, prof, true, opt, eps);
    const BlowupProbe right = probe_endpoint(mu, prof, false, opt, eps);
    const bool blow_ok = (left.d_blows || left.h_blows) && (right.d_blows || right.h_blows);
    std::string detail = "per-endpoint blow-up of d or |H| toward a and b";
    const bool left_d_only = left.d_blows && !left.h_blows;
    const bool right_d_only = right.d_blows && !right.h_blows;
    if (blow_ok && left_d_only != right_d_only) detail += " [mixed modes flagged]";
    add("endpoint-blowup", blow_ok,
        std::max({left.d_last, left.h_last, right.d_last, right.h_last}), detail);
  }

  // welding clause
  try {
    WeldingMap w = extract_welding_from_profile(mu, prof, !atom_case, opt);
    add("welding", true, w.max_residual,
        "decreasing homeomorphism with residual below " +
            std::to_string(opt.welding_residual_tol));
    verdict.welding = std::move(w);
  } catch (const NoWeldingError& e) {
    add("welding", false, e.residual, e.what());
  }

  if (!all_pass) verdict.kind = SlitCase::Rejected;
  return verdict;
}

// ---------------------------------------------------------------------------
// Curve reconstruction

SlitCurve reconstruct_slit(const Measure& mu, const CharacterizerOptions& opt) {
  const SupportProfile prof = build_profile(mu, opt);
  const bool zero_c = !prof.atom.has_value();
  const WeldingMap welding = extract_welding_from_profile(mu, prof, zero_c, opt);

  SlitCurve curve;
  const std::size_t m = prof.x.size();
  curve.params.reserve(m + 2);
  curve.points.reserve(m + 2);
  curve.error_estimates.reserve(m + 2);

  curve.params.push_back(prof.a);
  curve.points.push_back(zero_c ? cx{} : cx(1.0 / (kPi * prof.H.front()), 0.0));
  curve.error_estimates.push_back(zero_c ? 0.0 : prof.H_err.front());
  for (std::size_t i = 0; i < m; ++i) {
    const cx denom(prof.H[i], -prof.d[i]);
    if (std::abs(denom) < 1e-9)
      throw DomainError("reconstruct_slit: H - i d vanishes at x=" +
                        std::to_string(prof.x[i]));
    const cx gamma = 1.0 / (kPi * denom);
    curve.params.push_back(prof.x[i]);
    curve.points.push_back(gamma);
    curve.error_estimates.push_back(std::norm(gamma) * kPi * prof.H_err[i]);
  }
  curve.params.push_back(prof.b);
  curve.points.push_back(zero_c ? cx{} : cx(1.0 / (kPi * prof.H.back()), 0.0));
  curve.error_estimates.push_back(zero_c ? 0.0 : prof.H_err.back());

  curve.tip_param = welding.fixed_point;
  const double du = mu.density_value(welding.fixed_point);
  const double Hu = interp_profile(prof.x, prof.H, welding.fixed_point);
  curve.tip = 1.0 / (kPi * cx(Hu, -du));
  return curve;
}

// ---------------------------------------------------------------------------
// Atom location from the density part

std::optional<AtomLocation> locate_atom(const DensitySegment& density, double h_d_at_a,
                                        double h_d_at_b, int c_sign) {
  const double a = density.a(), b = density.b();
  const double lambda = 1.0 - density.mass();
  if (lambda < 1e-9) return std::nullopt;

  // H_d(b) > 0 > H_d(a) for a nonzero density, so the denominator below is
  // positive and the quadratic has one root on each side of [a,b].
  const double denom = h_d_at_b - h_d_at_a;
  if (std::abs(denom) < 1e-12)
    throw DomainError("locate_atom: H_d(a) = H_d(b), degenerate quadratic");
  const double K = lambda * (b - a) / (kPi * denom);
  const double disc = (b - a) * (b - a) + 4.0 * K;
  if (disc < 0.0) throw DomainError("locate_atom: negative discriminant");
  const double root_lo = 0.5 * ((a + b) - std::sqrt(disc));
  const double root_hi = 0.5 * ((a + b) + std::sqrt(disc));
  if (root_lo > a && root_hi < b)
    throw DomainError("locate_atom: both roots inside [a,b], inconsistent data");
  if (c_sign == 0) throw StructureError("locate_atom: sign of C required");
  const double x0 = c_sign > 0 ? root_lo : root_hi;
  if (x0 >= a && x0 <= b)
    throw DomainError("locate_atom: selected root falls inside [a,b]");
  return AtomLocation{x0, lambda};
}

std::optional<AtomLocation> locate_atom(const DensitySegment& density, int c_sign,
                                        const CharacterizerOptions& opt) {
  const std::vector<double> eps = schedule_or_default(opt);
  Measure density_only({}, {density});
  std::vector<double> seq(eps.size());
  auto h_at = [&](double x) {
    for (std::size_t k = 0; k < eps.size(); ++k)
      seq[k] = hilbert_radial(density_only, x, eps[k]);
    return extrapolate_to_zero(eps, seq, 2).limit;
  };
  return locate_atom(density, h_at(density.a()), h_at(density.b()), c_sign);
}

}  // namespace slitmap
