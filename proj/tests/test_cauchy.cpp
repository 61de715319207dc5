#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "slitmap/branch.hpp"
#include "slitmap/cauchy.hpp"
#include "slitmap/errors.hpp"
#include "slitmap/measure.hpp"

using namespace slitmap;
using cx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

Measure two_point() { return Measure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}}); }

Measure semicircle() { return Measure({}, {formula_segment("semicircle", -2.0, 2.0)}); }

Measure arcsine() { return Measure({}, {formula_segment("arcsine", -2.0, 2.0)}); }

// closed forms used as oracles
cx g_semicircle(cx z) { return (z - hp_sqrt(z * z - 4.0)) / 2.0; }
cx f_arcsine(cx z) { return hp_sqrt(z * z - 4.0); }

}  // namespace

TEST_CASE("cauchy transform closed forms") {
  const Measure d0 = Measure::point_mass(0.0);
  const Measure tp = two_point();
  for (cx z : {cx(0.3, 0.8), cx(-1.2, 0.4), cx(0.0, 3.0)}) {
    CHECK(std::abs(cauchy_transform(d0, z) - 1.0 / z) < 1e-15);
    CHECK(std::abs(cauchy_transform(tp, z) - z / (z * z - 1.0)) < 1e-14);
  }

  // semicircle vs (z - sqrt(z^2-4))/2; the value at z=2i is i(1-sqrt 2)
  const Measure sc = semicircle();
  const cx at_2i = cauchy_transform(sc, cx(0.0, 2.0));
  CHECK(std::abs(at_2i - cx(0.0, 1.0 - std::sqrt(2.0))) < 1e-7);
  for (cx z : {cx(0.5, 0.9), cx(-1.4, 0.05), cx(3.0, 0.01), cx(0.1, 2.5)}) {
    CHECK(std::abs(cauchy_transform(sc, z) - g_semicircle(z)) < 1e-6);
  }
}

TEST_CASE("cauchy transform basic mapping properties") {
  const Measure sc = semicircle();
  // Im z > 0 => Im G <= 0
  for (cx z : {cx(0.0, 0.1), cx(1.0, 0.5), cx(-1.8, 0.02)}) {
    CHECK(cauchy_transform(sc, z).imag() <= 0.0);
  }
  // G(iy) * iy -> 1
  const cx big = cauchy_transform(sc, cx(0.0, 1e4)) * cx(0.0, 1e4);
  CHECK(std::abs(big - 1.0) < 1e-6);
  // proximity error on the support
  CHECK_THROWS_AS(cauchy_transform(sc, cx(0.5, 0.0)), ProximityError);
}

TEST_CASE("f transform closed forms") {
  const Measure d0 = Measure::point_mass(0.0);
  CHECK(std::abs(f_transform(d0, cx(0.4, 1.1)) - cx(0.4, 1.1)) < 1e-14);

  // the paper's non-injectivity example: H(i/2 + sqrt3/2) = i
  const Measure tp = two_point();
  const cx z0(std::sqrt(3.0) / 2.0, 0.5);
  CHECK(std::abs(f_transform(tp, z0) - cx(0.0, 1.0)) < 1e-13);

  const Measure as = arcsine();
  for (cx z : {cx(0.7, 0.6), cx(-0.3, 1.2), cx(2.4, 0.1)}) {
    CHECK(std::abs(f_transform(as, z) - f_arcsine(z)) < 2e-5);
  }

  // pole of F where G vanishes
  const Measure tp2 = two_point();
  CHECK_THROWS_AS(f_transform(tp2, cx(0.0, 1e-15)), ProximityError);
}

TEST_CASE("f transform preserves the half-plane and its normalization") {
  for (const Measure& mu : {two_point(), semicircle(), arcsine()}) {
    for (cx z : {cx(0.2, 0.4), cx(-1.0, 0.9), cx(1.7, 0.15)}) {
      CHECK(f_transform(mu, z).imag() >= z.imag() - 1e-9);
    }
    const double radius = 2.0;  // all supports inside [-2,2]
    const double C = 2.0 * radius + 1.0;
    for (double y : {10.0, 100.0, 1000.0}) {
      CHECK(std::abs(f_transform(mu, cx(0.0, y)) / cx(0.0, y) - 1.0) <= C / y);
    }
  }
}

TEST_CASE("pick-nevanlinna evaluation") {
  // F(z) = z + b + int (1+tz)/(t-z) rho(dt), rho = 1/2 delta_0:
  // the t=0 term is -1/(2z)
  PickNevanlinna pn;
  pn.b = 0.7;
  pn.rho = Measure::from_atoms({{0.0, 0.5}});
  for (cx z : {cx(0.5, 1.0), cx(-2.0, 0.3)}) {
    const cx expect = z + 0.7 - 0.5 / z;
    CHECK(std::abs(evaluate_pick_nevanlinna(pn, z) - expect) < 1e-13);
  }
}

TEST_CASE("stieltjes inversion: pure atom") {
  auto g = [](cx z) { return 1.0 / z; };
  std::vector<double> grid;
  for (int i = 0; i <= 80; ++i) grid.push_back(-2.0 + 4.0 * i / 80.0);
  const auto eps = default_eps_schedule();
  const InversionResult inv = stieltjes_invert(g, grid, eps);
  REQUIRE(inv.atoms.size() == 1);
  CHECK(std::abs(inv.atoms[0].position) < 1e-9);
  CHECK(std::abs(inv.atoms[0].weight - 1.0) < 1e-9);
  for (const InversionPoint& p : inv.points) {
    if (std::abs(p.x) > 0.5) CHECK(std::abs(p.density) < 1e-6);
  }
}

TEST_CASE("stieltjes inversion: arcsine density value at 0") {
  auto g = [](cx z) { return 1.0 / hp_sqrt(z * z - 4.0); };
  std::vector<double> grid = {-1.0, -0.5, 0.0, 0.5, 1.0};
  const auto eps = default_eps_schedule();
  const InversionResult inv = stieltjes_invert(g, grid, eps);
  CHECK(inv.atoms.empty());
  CHECK(std::abs(inv.points[2].density - 1.0 / (2.0 * kPi)) < 1e-5);
  CHECK(inv.points[2].converged);
}

TEST_CASE("stieltjes inversion: two-atom residues") {
  // residue oracle: z/(z^2-1) = 1/2/(z-1) + 1/2/(z+1)
  auto g = [](cx z) { return z / (z * z - 1.0); };
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(-2.0 + 4.0 * i / 100.0);
  const auto eps = default_eps_schedule();
  const InversionResult inv = stieltjes_invert(g, grid, eps);
  REQUIRE(inv.atoms.size() == 2);
  CHECK(std::abs(inv.atoms[0].position + 1.0) < 1e-9);
  CHECK(std::abs(inv.atoms[0].weight - 0.5) < 1e-8);
  CHECK(std::abs(inv.atoms[1].position - 1.0) < 1e-9);
  CHECK(std::abs(inv.atoms[1].weight - 0.5) < 1e-8);
}

TEST_CASE("stieltjes inversion roundtrip on random atomic measures") {
  std::mt19937 rng(7771);
  std::uniform_real_distribution<double> du(0.0, 1.0);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 1 + static_cast<int>(du(rng) * 4);
    std::vector<Atom> atoms;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      double p;
      bool far;
      do {
        p = -3.0 + 6.0 * du(rng);
        far = true;
        for (const Atom& a : atoms) far = far && std::abs(a.position - p) > 0.4;
      } while (!far);
      atoms.push_back({p, 0.1 + du(rng)});
      mass += atoms.back().weight;
    }
    for (Atom& a : atoms) a.weight /= mass;
    const Measure mu = Measure::from_atoms(atoms);

    std::vector<double> grid;
    for (int i = 0; i <= 140; ++i) grid.push_back(-3.5 + 7.0 * i / 140.0);
    const auto eps = default_eps_schedule();
    const InversionResult inv = stieltjes_invert(mu, grid, eps);
    REQUIRE(inv.atoms.size() == mu.atoms().size());
    for (std::size_t i = 0; i < inv.atoms.size(); ++i) {
      CHECK(std::abs(inv.atoms[i].position - mu.atoms()[i].position) < 1e-6);
      CHECK(std::abs(inv.atoms[i].weight - mu.atoms()[i].weight) < 1e-6);
    }
  }
}

TEST_CASE("stieltjes inversion from a sampled transform grid") {
  auto g = [](cx z) { return 1.0 / z; };
  std::vector<double> xs = {-0.5, 0.0, 0.5};
  const auto eps = default_eps_schedule();
  std::vector<cx> pts, vals;
  for (double x : xs)
    for (double e : eps) {
      pts.emplace_back(x, e);
      vals.push_back(g(pts.back()));
    }
  const TransformGrid grid(pts, vals, TransformKind::CauchyG);
  const InversionResult inv = stieltjes_invert(grid, xs, eps);
  REQUIRE(inv.atoms.size() == 1);
  CHECK(inv.atoms[0].position == 0.0);  // grid variant reports the abscissa
  CHECK(std::abs(inv.atoms[0].weight - 1.0) < 1e-12);

  // a required point missing from the grid is a structural error
  std::vector<double> other = {0.25};
  CHECK_THROWS_AS(stieltjes_invert(grid, other, eps), StructureError);
}

TEST_CASE("f-transform characterization check") {
  auto make_grid = [](const std::function<cx(cx)>& f, bool with_ray, bool with_diag) {
    std::vector<cx> pts, vals;
    if (with_diag) {
      for (int i = 1; i <= 12; ++i) {
        const cx z = std::polar(0.3 + 0.25 * i, 3.0 * kPi / 4.0);
        pts.push_back(z);
        vals.push_back(f(z));
      }
    }
    if (with_ray) {
      for (double y : {5.0, 10.0, 20.0, 40.0, 80.0}) {
        pts.emplace_back(0.0, y);
        vals.push_back(f(cx(0.0, y)));
      }
    }
    return TransformGrid(pts, vals, TransformKind::FTransform);
  };

  auto f_surj = [](cx z) { return z - 1.0 / z; };
  CHECK(check_f_transform(make_grid(f_surj, true, true)).verdict == FVerdict::Plausible);

  auto f_square = [](cx z) { return z * z; };
  const FCheckReport rej = check_f_transform(make_grid(f_square, true, true));
  CHECK(rej.verdict == FVerdict::Rejected);
  CHECK(rej.reason.find("range") != std::string::npos);
  CHECK(rej.witness_value.imag() < 0.0);

  // a Pick-Nevanlinna form with small atomic rho is plausible
  PickNevanlinna pn;
  pn.b = -0.2;
  pn.rho = Measure::from_atoms({{0.5, 0.3}, {-1.0, 0.2}});
  auto f_pn = [&pn](cx z) { return evaluate_pick_nevanlinna(pn, z); };
  CHECK(check_f_transform(make_grid(f_pn, true, true)).verdict == FVerdict::Plausible);

  // no ray samples -> inconclusive
  CHECK(check_f_transform(make_grid(f_surj, false, true)).verdict ==
        FVerdict::Inconclusive);
}

TEST_CASE("herglotz-caratheodory closed forms") {
  const CircleMeasure uni = CircleMeasure::uniform();
  for (cx z : {cx(0.0, 0.0), cx(0.3, -0.4), cx(-0.7, 0.1)}) {
    CHECK(std::abs(herglotz_caratheodory(uni, z) - 1.0) < 1e-12);
  }

  const cx u = std::polar(1.0, 1.1);
  const CircleMeasure point = CircleMeasure::point(u);
  for (cx z : {cx(0.2, 0.5), cx(-0.6, -0.3)}) {
    CHECK(std::abs(herglotz_caratheodory(point, z) - (u + z) / (u - z)) < 1e-13);
  }

  // (delta_i + delta_{-i})/2 -> (1 - z^2)/(1 + z^2), by partial fractions
  const CircleMeasure pair({{kPi / 2.0, 0.5}, {3.0 * kPi / 2.0, 0.5}});
  for (cx z : {cx(0.25, 0.35), cx(-0.5, 0.2)}) {
    const cx expect = (1.0 - z * z) / (1.0 + z * z);
    CHECK(std::abs(herglotz_caratheodory(pair, z) - expect) < 1e-13);
  }

  CHECK_THROWS_AS(herglotz_caratheodory(uni, cx(1.2, 0.0)), DomainError);
}

TEST_CASE("herglotz positivity on random measures") {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> du(0.0, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n_atoms = 1 + static_cast<int>(du(rng) * 3);
    std::vector<CircleMeasure::CircleAtom> atoms;
    double mass = 0.0;
    for (int i = 0; i < n_atoms; ++i) {
      atoms.push_back({2.0 * kPi * du(rng), 0.05 + du(rng)});
      mass += atoms.back().weight;
    }
    for (auto& a : atoms) a.weight /= mass;
    const CircleMeasure m(atoms);
    const cx z = std::polar(0.95 * std::sqrt(du(rng)), 2.0 * kPi * du(rng));
    CHECK(herglotz_caratheodory(m, z).real() > 0.0);
    CHECK(std::abs(herglotz_caratheodory(m, cx{}) - 1.0) <= 1e-12);
  }
}

TEST_CASE("transform grid validation") {
  CHECK_THROWS_AS(TransformGrid({cx(0.0, -1.0)}, {cx{}}, TransformKind::CauchyG),
                  StructureError);
  CHECK_THROWS_AS(TransformGrid({cx(1.5, 0.0)}, {cx{}}, TransformKind::Caratheodory),
                  StructureError);
  CHECK_THROWS_AS(TransformGrid({cx(0.0, 1.0)}, {}, TransformKind::CauchyG),
                  StructureError);
}
