#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "slitmap/errors.hpp"
#include "slitmap/levy.hpp"
#include "slitmap/measure.hpp"

using namespace slitmap;
using cx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

// Independent quadrature oracle: midpoint rule in the substitution variable
// x = c + r sin(phi), which absorbs arcsine-type endpoint singularities.
double angle_quadrature_oracle(const std::function<double(double)>& f, double a,
                               double b, int n = 20000) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double phi = -kPi / 2 + kPi * (i + 0.5) / n;
    const double x = c + r * std::sin(phi);
    total += f(x) * r * std::cos(phi) * kPi / n;
  }
  return total;
}

Measure two_point() { return Measure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}}); }

Measure sampled_gaussian(double sigma, int n = 4097) {
  const double lim = 8.0 * sigma;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) {
    const double x = -lim + 2.0 * lim * i / (n - 1);
    vals[static_cast<std::size_t>(i)] =
        std::exp(-x * x / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * kPi));
  }
  Measure m({}, {DensitySegment(-lim, lim, vals)});
  m.mass_tolerance = 1e-7;
  return m;
}

}  // namespace

TEST_CASE("moments: point mass, symmetric atoms, arcsine") {
  CHECK(Measure::point_mass(3.0).moment(2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(two_point().moment(2) == doctest::Approx(1.0));

  // oracle for the arcsine variance on [-2,2]
  const double oracle = angle_quadrature_oracle(
      [](double x) { return x * x / (kPi * std::sqrt(4.0 - x * x)); }, -2.0, 2.0);
  CHECK(oracle == doctest::Approx(2.0).epsilon(1e-6));

  Measure arcs({}, {formula_segment("arcsine", -2.0, 2.0)});
  arcs.validate_probability();
  CHECK(arcs.moment(2) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(arcs.moment(1) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("formula segments have unit mass") {
  for (const char* id : {"arcsine", "semicircle", "uniform", "bump"}) {
    Measure m({}, {formula_segment(id, -2.0, 2.0)});
    CHECK_MESSAGE(std::abs(m.total_mass() - 1.0) < 1e-8, id);
  }
  CHECK_THROWS_AS(formula_segment("nope", 0.0, 1.0), StructureError);
}

TEST_CASE("measure invariants") {
  CHECK_THROWS_AS(Measure::from_atoms({{0.0, 0.5}, {0.0, 0.5}}).validate_structure(),
                  StructureError);
  CHECK_THROWS_AS(Measure::from_atoms({{0.0, -0.25}}).validate_structure(),
                  StructureError);
  Measure half = Measure::from_atoms({{0.0, 0.5}});
  CHECK_THROWS_AS(half.validate_probability(), StructureError);
  CHECK_THROWS_AS(DensitySegment(0.0, 1.0, std::vector<double>{1.0, -2.0, 1.0, 1.0, 1.0}),
                  StructureError);
}

TEST_CASE("fourier transform: closed forms") {
  // delta_0 -> 1
  const Measure d0 = Measure::point_mass(0.0);
  for (double x : {0.0, 0.7, -3.2}) {
    CHECK(std::abs(d0.fourier_transform(x) - 1.0) < 1e-15);
  }
  // symmetric two-point mass -> cos(x), by the two-term sum
  const Measure tp = two_point();
  for (double x : {0.3, 1.9, -4.4}) {
    CHECK(std::abs(tp.fourier_transform(x) - cx(std::cos(x), 0.0)) < 1e-14);
  }
  // sampled normal density -> exp(-sigma^2 x^2 / 2)
  const double sigma = 0.8;
  const Measure g = sampled_gaussian(sigma);
  for (double x : {0.0, 0.5, 1.5}) {
    const double expect = std::exp(-sigma * sigma * x * x / 2.0);
    CHECK(std::abs(g.fourier_transform(x) - expect) < 1e-6);
  }
  // modulus bound and value at zero
  CHECK(std::abs(g.fourier_transform(2.37)) <= 1.0 + 1e-12);
  CHECK(std::abs(g.fourier_transform(0.0) - 1.0) < 1e-7);
}

TEST_CASE("classical convolution: atomic closed forms") {
  // delta_a * delta_b = delta_{a+b}
  Measure c = convolve_classical(Measure::point_mass(1.5), Measure::point_mass(-0.25));
  REQUIRE(c.atoms().size() == 1);
  CHECK(c.atoms()[0].position == doctest::Approx(1.25));
  CHECK(c.atoms()[0].weight == doctest::Approx(1.0));

  // enumeration oracle for the symmetric two-point self-convolution
  const Measure tp = two_point();
  std::vector<Atom> oracle;
  for (const Atom& a : tp.atoms())
    for (const Atom& b : tp.atoms()) {
      bool merged = false;
      for (Atom& o : oracle)
        if (std::abs(o.position - (a.position + b.position)) < 1e-12) {
          o.weight += a.weight * b.weight;
          merged = true;
        }
      if (!merged) oracle.push_back({a.position + b.position, a.weight * b.weight});
    }
  REQUIRE(oracle.size() == 3);

  const Measure conv = convolve_classical(tp, tp);
  REQUIRE(conv.atoms().size() == 3);
  CHECK(conv.atoms()[0].position == doctest::Approx(-2.0));
  CHECK(conv.atoms()[0].weight == doctest::Approx(0.25));
  CHECK(conv.atoms()[1].position == doctest::Approx(0.0));
  CHECK(conv.atoms()[1].weight == doctest::Approx(0.5));
  CHECK(conv.atoms()[2].position == doctest::Approx(2.0));
  CHECK(conv.atoms()[2].weight == doctest::Approx(0.25));

  // identity element
  const Measure back = convolve_classical(tp, Measure::point_mass(0.0));
  REQUIRE(back.atoms().size() == 2);
  CHECK(back.atoms()[0].position == doctest::Approx(-1.0));
  CHECK(back.atoms()[1].weight == doctest::Approx(0.5));
}

TEST_CASE("fourier multiplicativity on random atomic measures") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> mass(0.1, 1.0);
  for (int rep = 0; rep < 12; ++rep) {
    auto random_atomic = [&](int n) {
      std::vector<Atom> atoms;
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        double p;
        bool ok;
        do {
          p = pos(rng);
          ok = true;
          for (const Atom& a : atoms) ok = ok && std::abs(a.position - p) > 1e-3;
        } while (!ok);
        atoms.push_back({p, mass(rng)});
        total += atoms.back().weight;
      }
      for (Atom& a : atoms) a.weight /= total;
      return Measure::from_atoms(std::move(atoms));
    };
    const Measure mu = random_atomic(1 + rep % 5);
    const Measure nu = random_atomic(1 + (rep * 7) % 5);
    const Measure conv = convolve_classical(mu, nu);
    CHECK(std::abs(conv.total_mass() - 1.0) < 1e-12);
    for (int j = 0; j < 100; ++j) {
      const double x = -5.0 + 10.0 * j / 99.0;
      const cx lhs = conv.fourier_transform(x);
      const cx rhs = mu.fourier_transform(x) * nu.fourier_transform(x);
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
  }
}

TEST_CASE("density convolution keeps mass and adds variances") {
  Measure u1({}, {formula_segment("uniform", -1.0, 1.0)});
  Measure b1({}, {formula_segment("bump", -1.0, 1.0)});
  const Measure conv = convolve_classical(u1, b1);
  CHECK(std::abs(conv.total_mass() - 1.0) < 1e-9);
  // centered inputs: variances add within quadrature tolerance
  CHECK(conv.moment(2) ==
        doctest::Approx(u1.moment(2) + b1.moment(2)).epsilon(2e-3));
  // the renormalization is recorded, never silent
  CHECK(conv.label().find("renormalized") != std::string::npos);
  // defining property spot check
  for (double x : {0.4, 1.3}) {
    const cx lhs = conv.fourier_transform(x);
    const cx rhs = u1.fourier_transform(x) * b1.fourier_transform(x);
    CHECK(std::abs(lhs - rhs) < 2e-3);
  }
}

TEST_CASE("convolution with an atom translates segments") {
  Measure b({}, {formula_segment("bump", -1.0, 1.0)});
  const Measure shifted = convolve_classical(b, Measure::point_mass(2.0));
  REQUIRE(shifted.segments().size() == 1);
  CHECK(shifted.segments()[0].a() == doctest::Approx(1.0));
  CHECK(shifted.segments()[0].b() == doctest::Approx(3.0));
  CHECK(shifted.density_value(2.0) == doctest::Approx(b.density_value(0.0)).epsilon(1e-9));
}

// ---------------------------------------------------------------------------
// Levy-Khintchine

TEST_CASE("levy-khintchine closed forms") {
  // pure Gaussian part
  LevyTriple gauss{0.0, 1.3, Measure{}};
  for (double x : {0.25, 1.0, 2.5}) {
    const double expect = std::exp(-1.3 * 1.3 * x * x / 2.0);
    CHECK(std::abs(levy_khintchine(gauss, x) - expect) < 1e-14);
  }

  // Poisson-type: nu = lambda delta_{x0}, |x0| >= 1; match at |x| >= 1 where
  // the printed cut-off convention and the jump-size convention agree.
  const double lambda = 0.7, x0 = 1.5;
  LevyTriple pois{0.0, 0.0, Measure::from_atoms({{x0, lambda}})};
  pois.jump.mass_tolerance = 1.0;  // nu is not a probability measure
  for (double x : {1.0, 2.2, -3.7}) {
    const cx expect = std::exp(lambda * (std::exp(cx(0.0, x * x0)) - 1.0));
    CHECK(std::abs(levy_khintchine(pois, x) - expect) <= 1e-12);
  }

  // drift factorization
  LevyTriple shifted = pois;
  shifted.drift = 0.4;
  for (double x : {1.1, 3.0}) {
    const cx expect = std::exp(cx(0.0, 0.4 * x)) * levy_khintchine(pois, x);
    CHECK(std::abs(levy_khintchine(shifted, x) - expect) < 1e-14);
  }
}

TEST_CASE("levy additivity of exponents") {
  LevyTriple t1{0.3, 0.9, Measure::from_atoms({{1.2, 0.5}})};
  LevyTriple t2{-0.1, 0.4, Measure::from_atoms({{-2.0, 0.25}})};
  LevyTriple sum{t1.drift + t2.drift, std::hypot(t1.sigma, t2.sigma), Measure{}};
  sum.jump = Measure::from_atoms({{1.2, 0.5}, {-2.0, 0.25}});
  for (double x : {1.0, 1.7, 2.9}) {
    const cx lhs = levy_khintchine(sum, x);
    const cx rhs = levy_khintchine(t1, x) * levy_khintchine(t2, x);
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("normalize_levy") {
  LevyTriple t{3.0, 1.0, Measure{}};
  const NormalizedLevy n = normalize_levy(t);
  CHECK(n.triple.drift == 0.0);
  CHECK(n.shift == doctest::Approx(-3.0));

  LevyTriple already{0.0, 0.5, Measure{}};
  CHECK(normalize_levy(already).shift == 0.0);

  // Poisson with |x0| < 1: drift lambda*x0 is removed
  const double lambda = 2.0, x0 = 0.5;
  LevyTriple pois{lambda * x0, 0.0, Measure::from_atoms({{x0, lambda}})};
  const NormalizedLevy np = normalize_levy(pois);
  CHECK(np.triple.drift == 0.0);
  CHECK(np.shift == doctest::Approx(-lambda * x0));
  REQUIRE(np.triple.jump.atoms().size() == 1);
  CHECK(np.triple.jump.atoms()[0].position == doctest::Approx(x0));
}

TEST_CASE("unique embedding classification") {
  LevyTriple gauss{0.0, 1.0, Measure{}};
  const EmbeddingVerdict vg = unique_embedding(gauss);
  CHECK(vg.unique);
  CHECK(vg.family == EmbeddingFamily::Gaussian);

  LevyTriple pois{0.0, 0.0, Measure::from_atoms({{2.0, 0.7}})};
  const EmbeddingVerdict vp = unique_embedding(pois);
  CHECK(vp.unique);
  CHECK(vp.family == EmbeddingFamily::PoissonType);

  LevyTriple mixed{0.0, 1.0, Measure::from_atoms({{2.0, 0.7}})};
  const EmbeddingVerdict vm = unique_embedding(mixed);
  CHECK_FALSE(vm.unique);
  CHECK(vm.detail.find("both clauses") != std::string::npos);

  LevyTriple dirac{0.0, 0.0, Measure{}};
  CHECK(unique_embedding(dirac).family == EmbeddingFamily::DiracAtZero);

  LevyTriple two_jumps{0.0, 0.0, Measure::from_atoms({{1.0, 0.3}, {2.0, 0.3}})};
  const EmbeddingVerdict vt = unique_embedding(two_jumps);
  CHECK_FALSE(vt.unique);
  CHECK(vt.detail.find("point mass") != std::string::npos);

  LevyTriple unnormalized{1.0, 1.0, Measure{}};
  CHECK_THROWS_AS(unique_embedding(unnormalized), StructureError);

  LevyTriple bad_nu{0.0, 0.0, Measure::from_atoms({{0.0, 0.5}})};
  CHECK_THROWS_AS(unique_embedding(bad_nu), StructureError);
}
