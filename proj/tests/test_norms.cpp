#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nsf/norms.hpp"
#include "nsf/operators.hpp"

using namespace nsf;
using std::numbers::pi;

namespace {

Grid walled_square(int n) {
  GridSpec s;
  s.counts = {n, n};
  return Grid::build(s);
}

Grid periodic_line(int n) {
  GridSpec s;
  s.dim = 1;
  s.counts = {n, 1};
  s.topology = {Topology::periodic, Topology::walled};
  return Grid::build(s);
}

ScalarField random_field(const Grid& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  return ScalarField::sample(g, [&](double, double) { return d(rng); });
}

State constant_state(const Grid& g, double t, double rho, double theta) {
  return State{t, ScalarField(g, rho), ScalarField(g, theta), VectorField(g)};
}

}  // namespace

TEST_CASE("constants and trigonometric closed forms") {
  const Grid g = walled_square(16);
  const ScalarField one(g, 1.0);
  for (double q : {1.0, 2.0, 4.5}) CHECK(lq_norm(one, q) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sobolev_norm(one, 2, 3.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sup_norm({&one}) == 1.0);
  CHECK(w1inf_norm({&one}) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(besov_norm(one, 4.0, 4.0) == doctest::Approx(1.0).epsilon(1e-14));

  const ScalarField s = ScalarField::sample(g, [](double x, double y) {
    return std::sin(pi * x) * std::sin(pi * y);
  });
  CHECK(lq_norm(s, 2.0) == doctest::Approx(0.5).epsilon(1e-13));

  const Grid line = periodic_line(64);
  const ScalarField w = ScalarField::sample(line, [](double x, double) { return std::sin(2 * pi * x); });
  CHECK(lq_norm(w, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  // the central difference of sin(2 pi x) is sin(2 pi h) / h times cos(2 pi x)
  const double h = 1.0 / 64;
  CHECK(sobolev_norm(w, 1, 2.0) ==
        doctest::Approx(std::sqrt(0.5) * (1 + std::sin(2 * pi * h) / h)).epsilon(1e-12));

  const VectorField u = VectorField::sample(g, [](double, double) { return std::array<double, 2>{3.0, 4.0}; });
  CHECK(lq_norm(u, 2.0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(sobolev_norm(u, 1, 2.0) == doctest::Approx(7.0).epsilon(1e-13));
}

TEST_CASE("norm axioms on random fields") {
  std::mt19937 rng(7);
  const Grid g = walled_square(12);
  for (int trial = 0; trial < 20; ++trial) {
    const ScalarField f = random_field(g, rng), h = random_field(g, rng);
    const double c = -2.5;
    for (double q : {1.0, 2.0, 3.5}) {
      CHECK(lq_norm(c * f, q) == doctest::Approx(2.5 * lq_norm(f, q)).epsilon(1e-12));
      CHECK(lq_norm(f + h, q) <= lq_norm(f, q) + lq_norm(h, q) + 1e-12);
      CHECK(sobolev_norm(f + h, 2, q) <= sobolev_norm(f, 2, q) + sobolev_norm(h, 2, q) + 1e-10);
    }
    CHECK(besov_norm(c * f, 4.0, 4.0) == doctest::Approx(2.5 * besov_norm(f, 4.0, 4.0)).epsilon(1e-12));
    CHECK(besov_norm(f + h, 4.0, 4.0) <= besov_norm(f, 4.0, 4.0) + besov_norm(h, 4.0, 4.0) + 1e-10);
    CHECK(besov_norm(f, 4.0, 4.0) >= lq_norm(f, 4.0));

    double scan = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) scan = std::max({scan, std::abs(f[n]), std::abs(h[n])});
    CHECK(sup_norm({&f, &h}) == scan);
    CHECK(w1inf_norm({&f, &h}) >= scan);
  }
}

TEST_CASE("second-order modulus") {
  SUBCASE("affine functions have zero modulus") {
    const Grid g = walled_square(16);
    const ScalarField a = ScalarField::sample(g, [](double x, double y) { return 2 + 3 * x - y; });
    CHECK(modulus_of_smoothness(a, 1.0, 2.0) < 1e-13);
    CHECK(besov_norm(a, 3.0, 4.0) == doctest::Approx(lq_norm(a, 4.0)).epsilon(1e-12));
  }
  SUBCASE("sine wave matches the closed form") {
    const int n = 64;
    const double h = 1.0 / n;
    const Grid g = periodic_line(n);
    const ScalarField w = ScalarField::sample(g, [](double x, double) { return std::sin(2 * pi * x); });
    for (double t : {h, 5 * h, 0.25, 0.6}) {
      double expect = 0.0;
      for (int k = 1; k * h <= t + 1e-12; ++k)
        expect = std::max(expect, 4 * std::pow(std::sin(pi * k * h), 2) * std::sqrt(0.5));
      CHECK(modulus_of_smoothness(w, t, 2.0) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  SUBCASE("rough fields cost more than smooth ones") {
    const Grid g = walled_square(32);
    const ScalarField smooth = ScalarField::sample(g, [](double x, double) { return std::sin(pi * x); });
    const ScalarField rough = ScalarField::sample(g, [](double x, double) { return std::sin(16 * pi * x); });
    const double ratio_smooth = besov_norm(smooth, 4.0, 4.0) / lq_norm(smooth, 4.0);
    const double ratio_rough = besov_norm(rough, 4.0, 4.0) / lq_norm(rough, 4.0);
    CHECK(ratio_rough > 5 * ratio_smooth);
  }
  CHECK_THROWS_AS(besov_modulus_norm(ScalarField(walled_square(8), 1.0), 2.0, 2.0, 2.0), NormError);
  CHECK_THROWS_AS(besov_norm(ScalarField(walled_square(8), 1.0), 1.0, 2.0), NormError);
}

TEST_CASE("material derivative") {
  const Grid g = walled_square(8);
  const ScalarField now = ScalarField::sample(g, [](double x, double) { return x; });
  const ScalarField prev = now - ScalarField(g, 0.1);
  const VectorField u = VectorField::sample(g, [](double, double) { return std::array<double, 2>{1.0, 0.0}; });
  const ScalarField m = material_derivative(prev, now, u, 0.1);
  for (std::size_t n = 0; n < g.size(); ++n) CHECK(m[n] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("composite norms of equilibria") {
  const Grid g = walled_square(8);
  Trajectory traj;
  for (int k = 0; k <= 4; ++k) traj.push(constant_state(g, 0.25 * k, 2.0, 3.0));
  CHECK(solution_norm_Spq(traj, 4.0, 4.0) == doctest::Approx(2.0 + 3.0 + 0.0 + 3.0).epsilon(1e-12));
  CHECK(data_norm_DpqI(traj.states[0].rho, traj.states[0].theta, traj.states[0].u, 4.0, 4.0) ==
        doctest::Approx(5.0).epsilon(1e-12));
  CHECK(chk_norm(traj, 6.0) == doctest::Approx(2.0 + 0.0 + 3.0 + 3.0 + 0.0 + 0.0).epsilon(1e-12));
  CHECK(data_norm_ChK(traj.states[0].rho, traj.states[0].theta, traj.states[0].u, 4.0) ==
        doctest::Approx(5.0).epsilon(1e-12));

  SUBCASE("density growing linearly in time") {
    Trajectory lin;
    for (int k = 0; k <= 4; ++k) lin.push(constant_state(g, 0.25 * k, 1.0 + 0.25 * k, 3.0));
    // sup ||rho|| = 2, ||theta||_{L^4 W^{2,4}} = 3, ||d_t rho||_{L^4 L^4} = 1, ||theta0||_B = 3
    CHECK(solution_norm_Spq(lin, 4.0, 4.0) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(chk_norm(lin, 4.0) == doctest::Approx(2.0 + 1.0 + 3.0 + 3.0).epsilon(1e-12));
  }
}

TEST_CASE("composite norm preconditions") {
  const Grid g = walled_square(8);
  Trajectory traj;
  traj.push(constant_state(g, 0.0, 1.0, 1.0));
  CHECK_THROWS_AS(solution_norm_Spq(traj, 4.0, 4.0), NormError);
  traj.push(constant_state(g, 0.5, 1.0, 1.0));
  CHECK_THROWS_AS(solution_norm_Spq(traj, 4.0, 3.0), NormError);
  CHECK_THROWS_AS(solution_norm_Spq(traj, 1.0, 4.0), NormError);
  CHECK_THROWS_AS(chk_norm(traj, 7.0), NormError);
  CHECK_THROWS_AS(chk_norm(traj, 3.0), NormError);
  traj.push(constant_state(g, 0.5, 1.0, 1.0));
  CHECK_THROWS_AS(solution_norm_Spq(traj, 4.0, 4.0), NormError);

  NormSpec spec;
  spec.kind = NormKind::composite_spq;
  spec.q = 3.0;
  CHECK_THROWS_AS(spec.validate(), NormError);
  spec.q = 4.0;
  spec.p = 4.0;
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.s() == doctest::Approx(1.5));
  spec.k = 3;
  CHECK_THROWS_AS(spec.validate(), NormError);
}
