#pragma once

#include <functional>
#include <memory>

#include "magweyl/cohomology.hpp"
#include "magweyl/magnetic.hpp"

namespace magweyl {

// Scalar endomorphism tau of X. On the exact group tau = num/den acts as
// multiplication by num * den^{-1} mod M_a (den must be invertible mod every M_a).
class Endo {
 public:
  static Endo rational(long num, long den = 1);
  static Endo real(double t);
  static Endo origin() { return rational(0); }
  static Endo identity() { return rational(1); }
  static Endo midpoint() { return rational(1, 2); }

  bool is_rational() const { return rational_; }
  long num() const { return num_; }
  long den() const { return den_; }
  double value() const { return rational_ ? static_cast<double>(num_) / den_ : t_; }

  Endo operator+(const Endo& o) const;
  Endo operator-(const Endo& o) const;
  Endo operator-() const;
  Endo times(long k) const;

  void validate(const BoxGrid& g) const;  // throws std::invalid_argument
  Point apply(const BoxGrid& g, const Point& x) const;

 private:
  bool rational_ = true;
  long num_ = 0;
  long den_ = 1;
  double t_ = 0.0;
};

// phi(q; x): q a base point (possibly off-grid in box mode), x a group element.
class AlgebraElement {
 public:
  using Eval = std::function<Complex(const Point& q, const Point& x)>;

  AlgebraElement(GridPtr grid, Eval f, double decay_radius = INFINITY);

  static AlgebraElement zero(GridPtr grid);
  // table(i, j) = phi(point(i); point(j)); exact or lattice grids.
  static AlgebraElement from_table(GridPtr grid, const CMatrix& table);
  // Complex Gaussian table entries; exact grids.
  static AlgebraElement random(GridPtr grid, std::uint64_t seed);
  // a(q) [x = 0] / weight
  static AlgebraElement multiplication(GridPtr grid, const ScalarField& a);
  // a(q) b(x)
  static AlgebraElement tensor(GridPtr grid, const ScalarField& a, const ScalarField& b);

  Complex operator()(const Point& q, const Point& x) const { return (*f_)(q, x); }
  const BoxGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  double decay_radius() const { return radius_; }

  // Materialize on an exact/lattice grid so nested expressions stay cheap.
  AlgebraElement tabulate() const;
  CMatrix table() const;

 private:
  GridPtr grid_;
  std::shared_ptr<const Eval> f_;
  double radius_;
};

struct TwistData {
  PhaseCochain lambda;
  PhaseCochain omega;

  static TwistData derived(const PhaseCochain& lambda);
  static TwistData supplied(const PhaseCochain& lambda, const PhaseCochain& omega, double tol = 1e-10,
                            int samples = 200, std::uint64_t seed = 0);
  static TwistData trivial(GridPtr grid);
};

AlgebraElement compose(const AlgebraElement& phi, const AlgebraElement& psi, const TwistData& twist,
                       const Endo& tau);
AlgebraElement involute(const AlgebraElement& phi, const TwistData& twist, const Endo& tau);
double l1_norm(const AlgebraElement& phi);
// (m_{tau,tau'} phi)(q; x) = phi(q + (tau' - tau) x; x)
AlgebraElement remap_tau(const AlgebraElement& phi, const Endo& tau, const Endo& tau_prime);

// M[x, y] = w phi(x + tau(y - x); y - x) lambda(x; y - x)
OperatorMatrix represent(const AlgebraElement& phi, const TwistData& twist, const Endo& tau);

OperatorMatrix multiplication_operator(const ScalarField& a, const BoxGrid& grid);
OperatorMatrix position_operator(int k, const BoxGrid& grid);
// [T(y) u](x) = lambda(x; y) u(x + y). Rows whose target leaves the box are zero.
OperatorMatrix translation_operator(const PhaseCochain& lambda, const Point& y, std::size_t* truncated_rows = nullptr);
OperatorMatrix magnetic_translation(const VectorPotential& A, const Point& y, GridPtr grid,
                                    const QuadratureRule& rule = QuadratureRule(),
                                    std::size_t* truncated_rows = nullptr);

enum class Derivative { Spectral, Central };
OperatorMatrix derivative_operator(int j, const BoxGrid& grid, Derivative kind = Derivative::Spectral);
// Pi_j = -i d_j - A_j(Q)
OperatorMatrix magnetic_momentum(const VectorPotential& A, int j, const BoxGrid& grid,
                                 Derivative kind = Derivative::Spectral);
// Matrix-free Pi_j u (FFT for the spectral derivative).
CVector apply_magnetic_momentum(const VectorPotential& A, int j, const BoxGrid& grid, const CVector& u,
                                Derivative kind = Derivative::Spectral);

// Regular representation on l^2(X x X), index (s, t) -> s * N + t with t the outer variable:
//   [W xi](s;t) = lambda(s;t) xi(s; s+t)
//   [r'(a) xi](s;t) = a(s+t) xi(s;t)
//   [T'(z) xi](s;t) = omega(s; t, z) xi(s; t+z)
OperatorMatrix regular_intertwiner(const PhaseCochain& lambda, std::size_t cap = 4096);
OperatorMatrix regular_multiplication(const ScalarField& a, const BoxGrid& grid, std::size_t cap = 4096);
OperatorMatrix regular_translation(const PhaseCochain& omega, const Point& z, std::size_t cap = 4096);
// 1 (x) M acting on the outer variable.
OperatorMatrix identity_tensor(const OperatorMatrix& M);

}  // namespace magweyl
