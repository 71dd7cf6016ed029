#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "magweyl/grid.hpp"

using namespace magweyl;

TEST_CASE("exact grid: linear order, axis 0 slowest") {
  BoxGrid g = BoxGrid::exact({3, 4});
  CHECK(g.size() == 12);
  CHECK(g.indices(5) == std::vector<int>{1, 1});
  CHECK(g.linear({2, 3}) == 11);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.index_of(g.point(i)) == i);
}

TEST_CASE("exact grid: group law mod M") {
  BoxGrid g = BoxGrid::exact({7, 5});
  std::mt19937_64 rng(1);
  for (int s = 0; s < 50; ++s) {
    Point x = g.random_point(rng), y = g.random_point(rng), z = g.random_point(rng);
    CHECK(g.same(g.add(g.add(x, y), z), g.add(x, g.add(y, z))));
    CHECK(g.same(g.add(x, g.neg(x)), g.zero()));
    CHECK(g.same(g.sub(x, y), g.add(x, g.neg(y))));
    CHECK(g.same(g.scale(3L, x), g.add(x, g.add(x, x))));
  }
  CHECK(g.same(g.reduce(Point{9.0, -1.0}), Point{2.0, 4.0}));
}

TEST_CASE("characters are bimultiplicative and separate points") {
  BoxGrid g = BoxGrid::exact({6});
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b) {
      Point k = g.dual_point(a), x = g.point(b);
      Complex c = g.character(k, x);
      CHECK(std::abs(std::abs(c) - 1.0) < 1e-15);
      for (std::size_t e = 0; e < g.size(); ++e) {
        Point y = g.point(e);
        CHECK(std::abs(g.character(k, g.add(x, y)) - c * g.character(k, y)) < 1e-13);
      }
    }
  // orthogonality: sum_x chi_k(x) = M [k = 0]
  for (std::size_t a = 0; a < g.size(); ++a) {
    Complex s = 0.0;
    for (std::size_t b = 0; b < g.size(); ++b) s += g.character(g.dual_point(a), g.point(b));
    Point k = g.dual_point(a);
    CHECK(std::abs(s - (k[0] == 0.0 ? 6.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("dual points are centred") {
  BoxGrid g = BoxGrid::exact({5});
  CHECK(g.dual_point(0)[0] == -2.0);
  CHECK(g.dual_point(2)[0] == 0.0);
  CHECK(g.dual_index(Point{7.0}) == g.dual_index(Point{2.0}));
  BoxGrid b = BoxGrid::box({8}, {2.0});
  CHECK(b.dual_point(4)[0] == doctest::Approx(0.0));
  CHECK(b.dual_point(5)[0] == doctest::Approx(2.0 * kPi / 4.0));
  CHECK(b.dual_index(b.dual_point(3)) == 3);
  CHECK_THROWS(b.dual_index(Point{0.1}));
}

TEST_CASE("fourier is unitary with the measure weights") {
  for (BoxGrid g : {BoxGrid::exact({5, 4}), BoxGrid::box({8, 6}, {2.0, 3.0})}) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    CVector u(g.size());
    for (auto& z : u) z = Complex(nd(rng), nd(rng));
    CVector uh = g.fourier(u, FourierDirection::Forward);
    CVector back = g.fourier(uh, FourierDirection::Inverse);
    CHECK((back - u).cwiseAbs().maxCoeff() < 1e-13);
    // Parseval with w and w'
    CHECK(g.weight() * u.squaredNorm() == doctest::Approx(g.dual_weight() * uh.squaredNorm()).epsilon(1e-12));
    // direct sum at one momentum
    std::size_t k = 3;
    Complex s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      Point x = g.is_exact() ? g.physical(g.point(i)) : g.point(i);
      Point p = g.momentum(g.dual_point(k));
      s += unit_phase(-dot(x, p)) * u[i];
    }
    CHECK(std::abs(g.weight() * s - uh[k]) < 1e-12);
  }
}

TEST_CASE("kernel_transform matches the direct sum") {
  BoxGrid g = BoxGrid::box({6, 5}, {1.5, 2.0});
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  CVector f(g.size());
  for (auto& z : f) z = Complex(nd(rng), nd(rng));
  CVector h = g.kernel_transform(f);
  for (std::size_t r = 0; r < g.size(); ++r) {
    std::vector<int> m = g.indices(r);
    Complex s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      Point p = g.dual_point(k);
      s += unit_phase(-(p[0] * m[0] * g.step(0) + p[1] * m[1] * g.step(1))) * f[k];
    }
    CHECK(std::abs(g.dual_weight() * s - h[r]) < 1e-12);
  }
}

TEST_CASE("box grid: points, locate and window") {
  BoxGrid g = BoxGrid::box({4}, {1.0});
  CHECK(g.step(0) == doctest::Approx(0.5));
  CHECK(g.point(0)[0] == doctest::Approx(-1.0));
  CHECK(g.locate(Point{0.5}).value() == 3);
  CHECK_FALSE(g.locate(Point{0.3}).has_value());
  CHECK_FALSE(g.locate(Point{1.0}).has_value());
  CHECK(g.offsets().size() == 3);  // |m| <= 1
  CHECK(g.in_window(Point{0.5}));
  CHECK_FALSE(g.in_window(Point{1.0}));
}

TEST_CASE("lattice grid is the centred box of Z^d") {
  BoxGrid g = BoxGrid::lattice(2, 3);
  CHECK(g.size() == 49);
  CHECK(g.is_lattice());
  CHECK(g.point(0)[0] == -3.0);
  CHECK(g.point(48)[1] == 3.0);
  CHECK(g.index_of(Point{0.0, 0.0}) == 24);
}

TEST_CASE("scalar fields: translate and cache") {
  GridPtr g = share(BoxGrid::exact({5}));
  ScalarField a([](const Point& x) { return Complex(x[0], 1.0); });
  ScalarField t = translate(a, Point{3.0}, g);
  CHECK(t(Point{4.0}) == Complex(2.0, 1.0));  // 4 + 3 = 2 mod 5
  ScalarField c = a.cached(g);
  CHECK(c.has_cache());
  CHECK(c(Point{2.0}) == a(Point{2.0}));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS(BoxGrid::exact({}));
  CHECK_THROWS(BoxGrid::exact({0}));
  CHECK_THROWS(BoxGrid::box({4}, {-1.0}));
  CHECK_THROWS(BoxGrid::box({4, 4}, {1.0}));
}
