#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "magweyl/cohomology.hpp"

using namespace magweyl;

namespace {

double max_dev(const PhaseCochain& a, const PhaseCochain& b, int degree, const BoxGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double e = 0.0;
  for (int s = 0; s < 100; ++s) {
    Point q = g.random_point(rng);
    std::vector<Point> xs;
    for (int i = 0; i < degree; ++i) xs.push_back(g.random_point(rng));
    e = std::max(e, std::abs(a(q, xs) - b(q, xs)));
  }
  return e;
}

}  // namespace

TEST_CASE("coboundary of a 0-cochain") {
  GridPtr g = share(BoxGrid::exact({7}));
  PhaseCochain c = PhaseCochain::random_table(0, g, 1);
  PhaseCochain d = coboundary(c);
  CHECK(d.degree() == 1);
  for (std::size_t i = 0; i < g->size(); ++i)
    for (std::size_t j = 0; j < g->size(); ++j) {
      Point q = g->point(i), x = g->point(j);
      CHECK(std::abs(d(q, x) - c(g->add(q, x)) / c(q)) < 1e-14);
    }
}

TEST_CASE("delta squared is trivial in every low degree") {
  for (BoxGrid base : {BoxGrid::exact({9}), BoxGrid::exact({5, 5}), BoxGrid::exact({3, 2, 4})}) {
    GridPtr g = share(base);
    for (int n = 0; n <= 2; ++n) {
      PhaseCochain r = PhaseCochain::random_table(n, g, 10 + n);
      CHECK(coboundary_defect(coboundary(r), 200, 5) < 1e-12);
    }
  }
}

TEST_CASE("random tables are normalized phases") {
  GridPtr g = share(BoxGrid::exact({6}));
  PhaseCochain l = PhaseCochain::random_table(1, g, 2);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(std::abs(l(g->point(i), g->zero()) - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(l(g->point(i), g->point((i + 1) % 6))) - 1.0) < 1e-14);
  }
  PhaseCochain l2 = PhaseCochain::random_table(1, g, 2);
  CHECK(max_dev(l, l2, 1, *g, 1) == 0.0);
}

TEST_CASE("is_cocycle accepts coboundaries and rejects random 2-cochains") {
  GridPtr g = share(BoxGrid::exact({5, 5}));
  PhaseCochain w = coboundary(PhaseCochain::random_table(1, g, 3));
  CocycleReport ok = is_cocycle(w, 200, 1e-12, 4);
  CHECK(ok.passed);
  CHECK(ok.cocycle_deviation < 1e-12);
  CHECK(ok.normalization_deviation < 1e-12);
  CocycleReport bad = is_cocycle(PhaseCochain::random_table(2, g, 5), 200, 1e-12, 4);
  CHECK_FALSE(bad.passed);
  CHECK(bad.cocycle_deviation > 1e-3);
}

TEST_CASE("pseudo-trivialization reproduces its cocycle") {
  GridPtr g = share(BoxGrid::exact({9}));
  PhaseCochain w = coboundary(PhaseCochain::random_table(1, g, 6));
  PhaseCochain l = pseudo_trivialize(w, true, 7);
  CHECK(l.degree() == 1);
  CHECK(max_dev(coboundary(l), w, 2, *g, 8) < 1e-12);
  // defined by rho(0; q, x)
  Point q{3.0}, x{5.0};
  CHECK(l(q, x) == w(g->zero(), q, x));
}

TEST_CASE("pseudo-trivialization check flags a non-cocycle") {
  GridPtr g = share(BoxGrid::exact({5}));
  CHECK_THROWS_AS(pseudo_trivialize(PhaseCochain::random_table(2, g, 9), true, 1), std::domain_error);
}

TEST_CASE("gauge transform leaves the cocycle unchanged") {
  GridPtr g = share(BoxGrid::exact({4, 3}));
  PhaseCochain l = PhaseCochain::random_table(1, g, 11);
  PhaseCochain c = PhaseCochain::random_table(0, g, 12);
  PhaseCochain mu = gauge_transform(l, c);
  CHECK(max_dev(coboundary(mu), coboundary(l), 2, *g, 13) < 1e-13);
  CHECK(max_dev(mu, coboundary(c) * l, 1, *g, 14) < 1e-15);
}

TEST_CASE("products and inverses") {
  GridPtr g = share(BoxGrid::exact({5}));
  PhaseCochain a = PhaseCochain::random_table(1, g, 1);
  PhaseCochain one = PhaseCochain::constant(1, g);
  CHECK(max_dev(a * a.inverse(), one, 1, *g, 2) < 1e-15);
  CHECK_THROWS_AS(a * PhaseCochain::random_table(2, g, 1), std::invalid_argument);
}

TEST_CASE("from_function keeps only the phase") {
  GridPtr g = share(BoxGrid::exact({4}));
  PhaseCochain c = PhaseCochain::from_function(g, [](const Point& x) { return Complex(2.0 * (x[0] + 1.0), 0.0); });
  CHECK(std::abs(c(Point{1.0}) - 1.0) < 1e-15);
}
