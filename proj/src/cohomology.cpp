#include "magweyl/cohomology.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>

namespace magweyl {

PhaseCochain::PhaseCochain(int degree, GridPtr grid, Eval f)
    : degree_(degree), grid_(std::move(grid)), f_(std::make_shared<const Eval>(std::move(f))) {
  if (degree_ < 0 || degree_ > kMaxDegree) throw std::invalid_argument("cochain: degree out of range");
  if (!grid_) throw std::invalid_argument("cochain: missing grid");
}

PhaseCochain PhaseCochain::constant(int degree, GridPtr grid, Complex value) {
  Complex v = renormalize(value);
  return PhaseCochain(degree, std::move(grid), [v](const Point&, std::span<const Point>) { return v; });
}

PhaseCochain PhaseCochain::from_function(GridPtr grid, std::function<Complex(const Point&)> c) {
  return PhaseCochain(0, std::move(grid), [c = std::move(c)](const Point& q, std::span<const Point>) { return c(q); });
}

PhaseCochain PhaseCochain::random_table(int degree, GridPtr grid, std::uint64_t seed) {
  if (!grid->is_exact()) throw std::invalid_argument("random_table: exact-group grid required");
  if (degree > 2) throw std::invalid_argument("random_table: degree <= 2 only");
  std::size_t N = grid->size();
  std::size_t len = N;
  for (int k = 0; k < degree; ++k) len *= N;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  auto table = std::make_shared<std::vector<Complex>>(len);
  for (auto& z : *table) z = unit_phase(ang(rng));
  std::size_t zero = grid->index_of(grid->zero());
  if (degree >= 1) {
    for (std::size_t q = 0; q < N; ++q) {
      if (degree == 1) (*table)[q * N + zero] = 1.0;
      else
        for (std::size_t x = 0; x < N; ++x) {
          (*table)[(q * N + x) * N + zero] = 1.0;
          (*table)[(q * N + zero) * N + x] = 1.0;
        }
    }
  }
  GridPtr g = grid;
  return PhaseCochain(degree, grid, [table, g, degree, N](const Point& q, std::span<const Point> x) {
    std::size_t i = g->index_of(q);
    for (int k = 0; k < degree; ++k) i = i * N + g->index_of(x[k]);
    return (*table)[i];
  });
}

Complex PhaseCochain::operator()(const Point& q, std::span<const Point> x) const {
  if (static_cast<int>(x.size()) < degree_) throw std::invalid_argument("cochain: too few arguments");
  return renormalize((*f_)(q, x.first(static_cast<std::size_t>(degree_))));
}

Complex PhaseCochain::operator()(const Point& q) const { return (*this)(q, std::span<const Point>()); }

Complex PhaseCochain::operator()(const Point& q, const Point& x) const {
  std::array<Point, 1> a{x};
  return (*this)(q, std::span<const Point>(a));
}

Complex PhaseCochain::operator()(const Point& q, const Point& x, const Point& y) const {
  std::array<Point, 2> a{x, y};
  return (*this)(q, std::span<const Point>(a));
}

PhaseCochain PhaseCochain::operator*(const PhaseCochain& other) const {
  if (other.degree_ != degree_) throw std::invalid_argument("cochain product: degree mismatch");
  PhaseCochain a = *this, b = other;
  return PhaseCochain(degree_, grid_, [a, b](const Point& q, std::span<const Point> x) {
    return renormalize(a(q, x) * b(q, x));
  });
}

PhaseCochain PhaseCochain::inverse() const {
  PhaseCochain a = *this;
  return PhaseCochain(degree_, grid_, [a](const Point& q, std::span<const Point> x) { return std::conj(a(q, x)); });
}

PhaseCochain coboundary(const PhaseCochain& rho) {
  const int n = rho.degree();
  if (n + 1 > PhaseCochain::kMaxDegree) throw std::invalid_argument("coboundary: degree too high");
  PhaseCochain r = rho;
  GridPtr g = rho.grid_ptr();
  return PhaseCochain(n + 1, g, [r, g, n](const Point& q, std::span<const Point> x) {
    std::array<Point, PhaseCochain::kMaxDegree> buf;
    // theta_{x_1}[rho(x_2..x_{n+1})]
    for (int i = 0; i < n; ++i) buf[i] = x[i + 1];
    Complex v = r(g->add(q, x[0]), std::span<const Point>(buf.data(), n));
    for (int j = 1; j <= n; ++j) {
      int k = 0;
      for (int i = 0; i <= n; ++i) {
        if (i == j) continue;
        buf[k++] = (i == j - 1) ? g->add(x[j - 1], x[j]) : x[i];
      }
      Complex t = r(q, std::span<const Point>(buf.data(), n));
      v = renormalize(v * ((j % 2 == 0) ? t : std::conj(t)));
    }
    for (int i = 0; i < n; ++i) buf[i] = x[i];
    Complex last = r(q, std::span<const Point>(buf.data(), n));
    v = renormalize(v * (((n + 1) % 2 == 0) ? last : std::conj(last)));
    return v;
  });
}

double coboundary_defect(const PhaseCochain& rho, int samples, std::uint64_t seed) {
  PhaseCochain d = coboundary(rho);
  std::mt19937_64 rng(seed);
  const BoxGrid& g = rho.grid();
  double worst = 0.0;
  std::array<Point, PhaseCochain::kMaxDegree> x;
  for (int s = 0; s < samples; ++s) {
    Point q = g.random_point(rng);
    for (int i = 0; i < d.degree(); ++i) x[i] = g.random_point(rng);
    worst = std::max(worst, std::abs(d(q, std::span<const Point>(x.data(), d.degree())) - 1.0));
  }
  return worst;
}

CocycleReport is_cocycle(const PhaseCochain& omega, int samples, double tol, std::uint64_t seed) {
  if (omega.degree() != 2) throw std::invalid_argument("is_cocycle: degree-2 cochain required");
  const BoxGrid& g = omega.grid();
  std::mt19937_64 rng(seed);
  CocycleReport rep;
  Point zero = g.zero();
  for (int s = 0; s < samples; ++s) {
    Point q = g.random_point(rng), x = g.random_point(rng), y = g.random_point(rng), z = g.random_point(rng);
    Complex lhs = omega(q, g.add(x, y), z) * omega(q, x, y);
    Complex rhs = omega(g.add(q, x), y, z) * omega(q, x, g.add(y, z));
    rep.cocycle_deviation = std::max(rep.cocycle_deviation, std::abs(lhs - rhs));
    rep.normalization_deviation = std::max(
        {rep.normalization_deviation, std::abs(omega(q, x, zero) - 1.0), std::abs(omega(q, zero, x) - 1.0)});
    rep.modulus_deviation = std::max(rep.modulus_deviation, std::abs(std::abs(omega(q, x, y)) - 1.0));
  }
  rep.passed = rep.cocycle_deviation <= tol && rep.normalization_deviation <= tol;
  return rep;
}

PhaseCochain pseudo_trivialize(const PhaseCochain& rho, bool check, std::uint64_t seed, double tol) {
  const int n = rho.degree();
  if (n < 1) throw std::invalid_argument("pseudo_trivialize: degree >= 1 required");
  if (check) {
    double dev = coboundary_defect(rho, 200, seed);
    if (dev > tol) throw std::domain_error("pseudo_trivialize: input fails the cocycle pre-check");
  }
  PhaseCochain r = rho;
  GridPtr g = rho.grid_ptr();
  return PhaseCochain(n - 1, g, [r, g, n](const Point& q, std::span<const Point> z) {
    std::array<Point, PhaseCochain::kMaxDegree> buf;
    buf[0] = q;
    for (int i = 0; i + 1 < n; ++i) buf[i + 1] = z[i];
    return r(g->zero(), std::span<const Point>(buf.data(), n));
  });
}

PhaseCochain gauge_transform(const PhaseCochain& lambda, const PhaseCochain& c) {
  if (lambda.degree() != 1 || c.degree() != 0) throw std::invalid_argument("gauge_transform: degrees (1, 0) required");
  return coboundary(c) * lambda;
}

}  // namespace magweyl
