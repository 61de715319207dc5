#pragma once

#include <span>
#include <string>
#include <vector>

#include "slitmap/extrapolate.hpp"
#include "slitmap/measure.hpp"

namespace slitmap {

/// One (x, eps) evaluation of both Hilbert variants, optionally extrapolated.
struct HilbertEvaluation {
  double x = 0.0;
  double eps = 0.0;
  double pv_value = 0.0;
  double radial_value = 0.0;
  bool has_extrapolated = false;
  Extrapolated extrapolated{};
};

/// Windowed principal-value transform with diagnostics: atoms inside the
/// eps-window are excluded from the integral, exactly as the definition
/// integrates over |x-t| > eps, and the excluded mass is reported.
struct HilbertWindow {
  double value = 0.0;
  double excluded_mass = 0.0;
  bool atom_in_window = false;
};

/// (1/pi) int_{|x-t|>eps} 1/(x-t) dmu(t).
///
/// Atoms outside the window contribute exact terms w/(pi(x-t)).  Closed-form
/// densities are integrated by pairing t = x+s with t = x-s so the odd
/// singular part cancels analytically, Simpson on the remainder; sampled
/// densities use the cell-exact rule for the piecewise-linear interpolant,
/// where the cancellation happens inside the per-cell antiderivative.
HilbertWindow hilbert_pv_detailed(const Measure& mu, double x, double eps);
double hilbert_pv(const Measure& mu, double x, double eps);

/// (1/pi) Re G_mu(x + i eps).
double hilbert_radial(const Measure& mu, double x, double eps);

enum class PlemeljVerdict { Pass, Fail, HypothesisViolation };

struct PlemeljReport {
  std::vector<double> eps;
  std::vector<double> pv_values;
  std::vector<double> radial_values;
  Extrapolated pv_limit{};
  Extrapolated radial_limit{};
  double difference = 0.0;
  PlemeljVerdict verdict = PlemeljVerdict::Fail;
  std::string note;
};

/// Compares the two eps-limits at x over the schedule; PASS when the
/// extrapolated limits agree within `tolerance`.  An atom within
/// max(schedule) of x violates the lemma's absolute-continuity hypothesis
/// and is flagged (not thrown), since equality is not guaranteed there.
PlemeljReport verify_plemelj(const Measure& mu, double x,
                             std::span<const double> eps_schedule,
                             double tolerance = 1e-6);

}  // namespace slitmap
