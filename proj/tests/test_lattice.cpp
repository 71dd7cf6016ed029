#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "magweyl/lattice.hpp"
#include "magweyl/parallel.hpp"
#include "magweyl/spectral.hpp"
#include "magweyl/verify.hpp"

using namespace magweyl;

TEST_CASE("rational flux is reduced") {
  RationalFlux f(6, 9);
  CHECK(f.p == 2);
  CHECK(f.q == 3);
  CHECK(RationalFlux(0, 5).q == 1);
  CHECK_THROWS(RationalFlux(1, 0));
}

TEST_CASE("omega_alpha conventions") {
  CHECK(std::abs(omega_alpha(0.5, {1, 0}, {0, 1}) - Complex(0.0, -1.0)) < 1e-15);
  CHECK(omega_alpha(0.37, {2, 3}, {2, 3}) == Complex(1.0));
  CHECK(std::abs(omega_alpha(0.37, {1, 2}, {-1, -2}) - 1.0) < 1e-15);
  CHECK(std::abs(omega_alpha(0.2, {1, 2}, {3, -1}) * omega_alpha(0.2, {3, -1}, {1, 2}) - 1.0) < 1e-14);
}

TEST_CASE("generators commute up to the rotation phase") {
  const double a = 0.23;
  LatticeElement u = generator_u(), v = generator_v();
  LatticeElement uv = twisted_convolve(u, v, a), vu = twisted_convolve(v, u, a);
  CHECK(uv.distance(vu * unit_phase(-2.0 * kPi * a)) < 1e-15);
  CHECK(twisted_convolve(u, lattice_involute(u), a).distance(LatticeElement::delta({0, 0})) < 1e-15);
}

TEST_CASE("element bookkeeping") {
  LatticeElement e;
  e.add({1, -2}, 2.0);
  e.add({1, -2}, -2.0);
  CHECK(e.empty());
  e.add({3, 0}, Complex(0.0, 2.0));
  e.add({-1, 1}, 1.0);
  CHECK(e.support_radius() == 3);
  CHECK(e.l1() == doctest::Approx(3.0));
  CHECK((e + e)({3, 0}) == Complex(0.0, 4.0));
  CHECK(e({7, 7}) == Complex(0.0));
}

TEST_CASE("almost Mathieu element") {
  LatticeElement h = almost_mathieu(0.3, 2.0, 0.25);
  CHECK(h.terms().size() == 4);
  CHECK(std::abs(h({0, 1}) - 2.0 * Complex(0.0, 1.0)) < 1e-15);
  CHECK(h.distance(lattice_involute(h)) < 1e-15);
}

TEST_CASE("lattice cochains pseudo-trivialize exactly") {
  GridPtr g = share(BoxGrid::lattice(2, 4));
  PhaseCochain w = omega_alpha_cochain(0.3, g);
  PhaseCochain l = lambda_alpha(0.3, g);
  PhaseCochain t = pseudo_trivialize(w);
  std::mt19937_64 rng(1);
  for (int s = 0; s < 50; ++s) {
    Point q = g->random_point(rng), x = g->random_point(rng);
    CHECK(t(q, x) == l(q, x));
  }
}

TEST_CASE("truncated representation") {
  const double a = 0.3;
  LatticeElement phi = LatticeElement::delta({1, 0}, 2.0) + LatticeElement::delta({0, -1}, Complex(0.0, 1.0));
  CMatrix R = rep_lattice(phi, a, 3);
  CHECK(R.rows() == 49);
  CHECK_THROWS_AS(rep_lattice(LatticeElement::delta({5, 0}), a, 3), std::invalid_argument);
  CHECK_THROWS_AS(rep_lattice(phi, a, 40), std::length_error);
  // Rep(phi^) = Rep(phi)^*
  CHECK(rel_diff(rep_lattice(lattice_involute(phi), a, 3), R.adjoint()) < 1e-15);
}

TEST_CASE("banded storage matches the dense representation") {
  LatticeElement h = almost_mathieu(1.0 / 3.0, 1.0, 0.1);
  BandedHermitian B = rep_lattice_banded(h, 1.0 / 3.0, 5);
  CMatrix D = rep_lattice(h, 1.0 / 3.0, 5);
  CHECK(rel_diff(B.dense(), D) < 1e-15);
  std::vector<double> a = eigvalsh_banded(B), b = eigh(D).values;
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  CHECK_THROWS_AS(rep_lattice_banded(generator_u(), 0.3, 4), std::invalid_argument);
}

TEST_CASE("Bloch generators") {
  RationalFlux f(2, 5);
  BlochGenerators g = bloch_generators(f, 0.4, 1.1);
  CHECK(rel_diff(g.u * g.v, unit_phase(2.0 * kPi * 0.4) * g.v * g.u) < 1e-14);
  CHECK(rel_diff(g.u.adjoint() * g.u, CMatrix::Identity(5, 5)) < 1e-15);
  CMatrix H = bloch_harper(f, 1.0, 0.0, 0.4, 1.1);
  CHECK(rel_diff(H, g.u + g.u.adjoint() + g.v + g.v.adjoint()) < 1e-15);
}

TEST_CASE("q = 1 and q = 2 closed forms") {
  auto b0 = bloch_bands(RationalFlux(0, 1), 64, 1.0, 0.0);
  REQUIRE(b0.size() == 1);
  CHECK(b0[0].lo == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(b0[0].hi == doctest::Approx(4.0).epsilon(1e-12));
  auto b1 = bloch_bands(RationalFlux(1, 2), 64, 1.0, 0.0);
  REQUIRE(b1.size() == 1);
  CHECK(b1[0].hi == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  auto b3 = bloch_bands(RationalFlux(1, 3), 32, 1.0, 0.0);
  CHECK(b3.size() == 3);
  // symmetric about zero
  CHECK(b3[0].lo == doctest::Approx(-b3[2].hi).epsilon(1e-12));
}

TEST_CASE("butterfly CSV") {
  std::string one = butterfly_csv(butterfly(1, 8, 1.0, 0.0));
  CHECK(one == "p,q,alpha,band_index,E_min,E_max\n0,1,0,0,-4,4\n");
  auto rows = butterfly(2, 16, 1.0, 0.0);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].q == 2);
  CHECK(rows[1].lo == doctest::Approx(-2.0 * std::sqrt(2.0)));
  // ordered by alpha, reduced fractions only
  auto many = butterfly(6, 4, 1.0, 0.0);
  for (std::size_t i = 1; i < many.size(); ++i) CHECK(many[i - 1].alpha <= many[i].alpha);
  for (const auto& r : many) CHECK(std::gcd(r.p, r.q) == 1);
}

TEST_CASE("butterfly output does not depend on the thread count") {
  set_thread_count(1);
  std::string a = butterfly_csv(butterfly(9, 8, 1.0, 0.0));
  set_thread_count(3);
  std::string b = butterfly_csv(butterfly(9, 8, 1.0, 0.0));
  set_thread_count(1);
  CHECK(a == b);
}

TEST_CASE("torus coefficients and weighted convolution") {
  auto b = [](const std::vector<double>& t) {
    return Complex(1.0 + 2.0 * std::cos(t[0]) + std::sin(t[1] - t[0]), 0.0) * 0.5;
  };
  LatticeElement c = torus_coefficients(b, 16);
  CHECK(std::abs(c({0, 0}) - 0.5) < 1e-14);
  CHECK(std::abs(c({1, 0}) - 0.5) < 1e-14);
  CHECK(std::abs(c({-1, 1}) - Complex(0.0, -0.25)) < 1e-14);
  GridPtr g = share(BoxGrid::lattice(2, 3));
  CMatrix W = weighted_convolution_op(b, lambda_alpha(0.3, g), {2, 16, 1e-10});
  CHECK(rel_diff(W, rep_lattice(c, 0.3, 3)) < 1e-14);
  auto wide = [](const std::vector<double>& t) { return Complex(1.0 / (1.2 - std::cos(t[0])), 0.0); };
  CHECK_THROWS_AS(weighted_convolution_op(wide, lambda_alpha(0.3, g), {2, 32, 1e-10}), std::domain_error);
}
