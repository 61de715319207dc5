#include "slitmap/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slitmap/cauchy.hpp"
#include "slitmap/errors.hpp"

namespace slitmap {

namespace {

using cx = std::complex<double>;

cx slit_kernel(cx kappa, cx z) { return (kappa - z) / (kappa + z); }

}  // namespace

HerglotzField::HerglotzField(SingleDriving v) : field_(std::move(v)) {}
HerglotzField::HerglotzField(ConvexCombination v) : field_(std::move(v)) {}
HerglotzField::HerglotzField(BoundaryMeasureFamily v) : field_(std::move(v)) {}

HerglotzField HerglotzField::single(DrivingFunction kappa) {
  if (kappa.mode() != DrivingMode::RadialCircle)
    throw StructureError("herglotz field: single driving needs a radial driving function");
  return HerglotzField(SingleDriving{std::move(kappa)});
}

HerglotzField HerglotzField::convex(std::vector<Component> components) {
  if (components.empty()) throw StructureError("herglotz field: empty combination");
  double total = 0.0;
  for (const Component& c : components) {
    if (c.kappa.mode() != DrivingMode::RadialCircle)
      throw StructureError("herglotz field: combination components must be radial");
    if (!(c.weight > 0.0)) throw StructureError("herglotz field: weights must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw StructureError("herglotz field: weights must sum to 1");
  return HerglotzField(ConvexCombination{std::move(components)});
}

HerglotzField HerglotzField::boundary_family(std::function<CircleMeasure(double)> f) {
  if (!f) throw StructureError("herglotz field: null measure family");
  return HerglotzField(BoundaryMeasureFamily{std::move(f)});
}

HerglotzField HerglotzField::radial_uniform() {
  return boundary_family([](double) { return CircleMeasure::uniform(); });
}

std::complex<double> HerglotzField::evaluate(double t, cx z) const {
  if (!(std::abs(z) < 1.0)) throw DomainError("herglotz field: |z| must be < 1");
  if (const auto* s = std::get_if<SingleDriving>(&field_))
    return slit_kernel(s->kappa.circle_at(t), z);
  if (const auto* c = std::get_if<ConvexCombination>(&field_)) {
    cx p{};
    for (const Component& comp : c->components)
      p += comp.weight * slit_kernel(comp.kappa.circle_at(t), z);
    return p;
  }
  const auto& fam = std::get<BoundaryMeasureFamily>(field_);
  return herglotz_caratheodory(fam.measure_at(t), z);
}

bool HerglotzField::is_slit_like() const {
  return !std::holds_alternative<BoundaryMeasureFamily>(field_);
}

double HerglotzField::pole_distance(double t, cx w) const {
  if (const auto* s = std::get_if<SingleDriving>(&field_))
    return std::abs(w + s->kappa.circle_at(t));
  if (const auto* c = std::get_if<ConvexCombination>(&field_)) {
    double d = std::numeric_limits<double>::infinity();
    for (const Component& comp : c->components)
      d = std::min(d, std::abs(w + comp.kappa.circle_at(t)));
    return d;
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<double> HerglotzField::breakpoints(double s, double t) const {
  std::vector<double> bp;
  auto collect = [&bp, s, t](const DrivingFunction& k) {
    for (double u : k.times())
      if (u > s && u < t) bp.push_back(u);
  };
  if (const auto* sd = std::get_if<SingleDriving>(&field_)) collect(sd->kappa);
  if (const auto* c = std::get_if<ConvexCombination>(&field_))
    for (const Component& comp : c->components) collect(comp.kappa);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

// ---------------------------------------------------------------------------
// Transition mappings: embedded Dormand-Prince 5(4)

namespace {

struct Dopri5 {
  // Butcher tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

// One adaptive integration of dw/dt = -w p(t,w) from (t0, w0) to t1.
TransitionPoint integrate_leg(const HerglotzField& field, double t0, double t1, cx w0,
                              const LoewnerOptions& opt) {
  auto rhs = [&field](double t, cx w) { return -w * field.evaluate(t, w); };
  double t = t0;
  cx w = w0;
  double h = std::min(0.1, t1 - t0);
  const bool slit = field.is_slit_like();
  cx k1 = rhs(t, w);
  int rejected_in_row = 0;
  while (t < t1) {
    if (slit) h = std::min(h, opt.pole_step_fraction * field.pole_distance(t, w));
    h = std::min(h, t1 - t);
    if (h < opt.min_step * std::max(1.0, t)) return {w, t, false};

    using D = Dopri5;
    const cx k2 = rhs(t + D::c2 * h, w + h * (D::a21 * k1));
    const cx k3 = rhs(t + D::c3 * h, w + h * (D::a31 * k1 + D::a32 * k2));
    const cx k4 = rhs(t + D::c4 * h, w + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3));
    const cx k5 = rhs(t + D::c5 * h,
                      w + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4));
    const cx k6 = rhs(t + h, w + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 +
                                      D::a64 * k4 + D::a65 * k5));
    const cx w5 =
        w + h * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 + D::b6 * k6);
    const cx k7 = rhs(t + h, w5);
    const cx err_vec = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 +
                            D::e6 * k6 + D::e7 * k7);
    const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(w), std::abs(w5));
    const double err = std::abs(err_vec) / scale;

    if (err <= 1.0) {
      t += h;
      w = w5;
      k1 = k7;  // FSAL
      // keep the state inside the closed disc against roundoff
      const double r = std::abs(w);
      if (r >= 1.0) w *= (1.0 - 1e-15) / r;
      rejected_in_row = 0;
    } else {
      ++rejected_in_row;
      if (rejected_in_row > 60) return {w, t, false};
    }
    const double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::clamp(factor, 0.2, 5.0);
  }
  return {w, t, true};
}

}  // namespace

std::vector<TransitionPoint> solve_transition(const HerglotzField& field, double s,
                                              double t, std::span<const cx> z_grid,
                                              const LoewnerOptions& opt) {
  if (!(0.0 <= s) || !(s <= t)) throw StructureError("solve_transition: need 0 <= s <= t");
  std::vector<double> legs = field.breakpoints(s, t);
  legs.push_back(t);

  std::vector<TransitionPoint> out;
  out.reserve(z_grid.size());
  for (const cx& z : z_grid) {
    if (!(std::abs(z) < 1.0)) throw DomainError("solve_transition: grid point outside the disc");
    TransitionPoint p{z, s, true};
    for (double leg_end : legs) {
      p = integrate_leg(field, p.reached_time, leg_end, p.value, opt);
      if (!p.complete) break;
    }
    out.push_back(p);
  }
  return out;
}

ChainResult chain_initial(const HerglotzField& field, double s, std::span<const cx> z_grid,
                          const ChainOptions& opt) {
  ChainResult res;
  res.values.resize(z_grid.size());
  std::vector<cx> prev(z_grid.size());
  bool have_prev = false;

  for (double T = opt.horizon_start; T <= opt.horizon_max + 1e-9; T *= 2.0) {
    const std::vector<TransitionPoint> phi = solve_transition(field, s, s + T, z_grid, opt.ode);
    double worst = 0.0;
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
      if (!phi[i].complete)
        throw ConvergenceError("chain_initial: transition solve stopped before the horizon");
      const cx v = std::exp(s + T) * phi[i].value;
      if (have_prev) {
        const double d = std::abs(v - prev[i]);
        res.values[i].error_estimate = d;
        worst = std::max(worst, d);
      }
      res.values[i].value = v;
      prev[i] = v;
    }
    res.horizon_used = T;
    if (have_prev && worst < opt.tol) return res;
    have_prev = true;
  }
  throw ConvergenceError(
      "chain_initial: horizon doubling did not settle below tolerance by T=" +
      std::to_string(opt.horizon_max) + " (horizon too small or field non-contracting)");
}

}  // namespace slitmap
