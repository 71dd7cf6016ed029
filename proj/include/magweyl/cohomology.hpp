#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "magweyl/grid.hpp"

namespace magweyl {

// Unit-modulus n-cochain: (q; x_1..x_n) -> T. Evaluations are lazy; every
// value handed out is renormalized onto the unit circle.
class PhaseCochain {
 public:
  static constexpr int kMaxDegree = 6;
  using Eval = std::function<Complex(const Point& q, std::span<const Point> x)>;

  PhaseCochain(int degree, GridPtr grid, Eval f);

  static PhaseCochain constant(int degree, GridPtr grid, Complex value = 1.0);
  // Exact-group tables with uniformly random phases, normalized so that a
  // degree-1 table satisfies lambda(q;0) = 1.
  static PhaseCochain random_table(int degree, GridPtr grid, std::uint64_t seed);
  // Degree-0 from a scalar function (phase taken).
  static PhaseCochain from_function(GridPtr grid, std::function<Complex(const Point&)> c);

  int degree() const { return degree_; }
  const BoxGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  Complex operator()(const Point& q, std::span<const Point> x) const;
  Complex operator()(const Point& q) const;
  Complex operator()(const Point& q, const Point& x) const;
  Complex operator()(const Point& q, const Point& x, const Point& y) const;

  PhaseCochain operator*(const PhaseCochain& other) const;
  PhaseCochain inverse() const;

 private:
  int degree_;
  GridPtr grid_;
  std::shared_ptr<const Eval> f_;
};

PhaseCochain coboundary(const PhaseCochain& rho);

struct CocycleReport {
  double cocycle_deviation = 0.0;
  double normalization_deviation = 0.0;
  double modulus_deviation = 0.0;
  bool passed = false;
};

// Samples omega(q+x;y,z) omega(q;x,y+z) = omega(q;x+y,z) omega(q;x,y) and
// omega(q;x,0) = omega(q;0,x) = 1.
CocycleReport is_cocycle(const PhaseCochain& omega, int samples, double tol, std::uint64_t seed);

// rho^{n-1}(q; z_1..z_{n-1}) := rho^n(0; q, z_1..z_{n-1}).
PhaseCochain pseudo_trivialize(const PhaseCochain& rho, bool check = false, std::uint64_t seed = 0,
                               double tol = 1e-10);

// mu = delta^0(c) * lambda.
PhaseCochain gauge_transform(const PhaseCochain& lambda, const PhaseCochain& c);

// max |delta(rho) - 1| over random tuples (rho of any degree).
double coboundary_defect(const PhaseCochain& rho, int samples, std::uint64_t seed);

}  // namespace magweyl
