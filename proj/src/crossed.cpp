#include "magweyl/crossed.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

#include "magweyl/parallel.hpp"

namespace magweyl {

namespace {

long gcd_l(long a, long b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

long mod_inverse(long a, long m) {
  // extended Euclid on (m, a mod m)
  long r = mod(a, m);
  long old_r = m, old_s = 0, s = 1;
  while (r != 0) {
    long qt = old_r / r;
    long t = old_r - qt * r;
    old_r = r;
    r = t;
    t = old_s - qt * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::invalid_argument("endomorphism: denominator not invertible mod M");
  return mod(old_s, m);
}

void same_grid(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.grid_ptr() != b.grid_ptr() &&
      (a.grid().mode() != b.grid().mode() || a.grid().size() != b.grid().size()))
    throw std::invalid_argument("algebra: backend mismatch");
}

void same_grid(const AlgebraElement& a, const TwistData& t) {
  if (a.grid().mode() != t.lambda.grid().mode() || a.grid().size() != t.lambda.grid().size())
    throw std::invalid_argument("algebra: twist lives on a different backend");
}

bool within(const Point& y, double r) {
  if (!std::isfinite(r)) return true;
  for (int a = 0; a < y.dim; ++a)
    if (std::abs(y[a]) > r + 1e-12) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- Endo

Endo Endo::rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("endomorphism: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long g = gcd_l(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Endo e;
  e.rational_ = true;
  e.num_ = num;
  e.den_ = den;
  return e;
}

Endo Endo::real(double t) {
  Endo e;
  e.rational_ = false;
  e.t_ = t;
  return e;
}

Endo Endo::operator+(const Endo& o) const {
  if (rational_ && o.rational_) return rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  return real(value() + o.value());
}

Endo Endo::operator-(const Endo& o) const { return *this + (-o); }

Endo Endo::operator-() const { return rational_ ? rational(-num_, den_) : real(-t_); }

Endo Endo::times(long k) const { return rational_ ? rational(k * num_, den_) : real(static_cast<double>(k) * t_); }

void Endo::validate(const BoxGrid& g) const {
  if (g.is_exact()) {
    if (!rational_) throw std::invalid_argument("endomorphism: the exact group needs a rational tau");
    for (int a = 0; a < g.dim(); ++a)
      if (gcd_l(den_, g.count(a)) != 1)
        throw std::invalid_argument("endomorphism: denominator of tau shares a factor with M");
  } else if (g.is_lattice()) {
    if (!rational_ || den_ != 1) throw std::invalid_argument("endomorphism: Z^d only admits integer tau");
  }
}

Point Endo::apply(const BoxGrid& g, const Point& x) const {
  if (g.is_exact()) {
    if (!rational_) throw std::invalid_argument("endomorphism: the exact group needs a rational tau");
    Point r(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
      long m = g.count(a);
      long t = mod(mod(num_, m) * mod_inverse(den_, m), m);
      r[a] = static_cast<double>(mod(t * std::lround(x[a]), m));
    }
    return r;
  }
  if (g.is_lattice()) {
    if (!rational_ || den_ != 1) throw std::invalid_argument("endomorphism: Z^d only admits integer tau");
    return static_cast<double>(num_) * x;
  }
  return value() * x;
}

// ---------------------------------------------------------------- elements

AlgebraElement::AlgebraElement(GridPtr grid, Eval f, double decay_radius)
    : grid_(std::move(grid)), f_(std::make_shared<const Eval>(std::move(f))), radius_(decay_radius) {
  if (!grid_) throw std::invalid_argument("algebra element: missing grid");
}

AlgebraElement AlgebraElement::zero(GridPtr grid) {
  return AlgebraElement(std::move(grid), [](const Point&, const Point&) { return Complex(0.0); }, 0.0);
}

AlgebraElement AlgebraElement::from_table(GridPtr grid, const CMatrix& table) {
  if (static_cast<std::size_t>(table.rows()) != grid->size() || static_cast<std::size_t>(table.cols()) != grid->size())
    throw std::invalid_argument("from_table: table must be N x N");
  if (!grid->is_exact() && !grid->is_lattice()) throw std::invalid_argument("from_table: exact or lattice grid required");
  auto t = std::make_shared<const CMatrix>(table);
  GridPtr g = grid;
  return AlgebraElement(grid, [t, g](const Point& q, const Point& x) {
    auto i = g->locate(q);
    auto j = g->locate(x);
    if (!i || !j) return Complex(0.0);
    return (*t)(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j));
  });
}

AlgebraElement AlgebraElement::random(GridPtr grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  auto N = static_cast<Eigen::Index>(grid->size());
  CMatrix t(N, N);
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < N; ++i) t(i, j) = Complex(n(rng), n(rng));
  return from_table(std::move(grid), t);
}

AlgebraElement AlgebraElement::multiplication(GridPtr grid, const ScalarField& a) {
  GridPtr g = grid;
  double inv_w = 1.0 / grid->weight();
  return AlgebraElement(grid, [g, a, inv_w](const Point& q, const Point& x) {
    return g->same(x, g->zero()) ? a(q) * inv_w : Complex(0.0);
  }, 0.0);
}

AlgebraElement AlgebraElement::tensor(GridPtr grid, const ScalarField& a, const ScalarField& b) {
  return AlgebraElement(std::move(grid), [a, b](const Point& q, const Point& x) { return a(q) * b(x); },
                        b.decay_radius());
}

CMatrix AlgebraElement::table() const {
  if (!grid_->is_exact() && !grid_->is_lattice()) throw std::invalid_argument("tabulate: exact or lattice grid required");
  auto N = static_cast<Eigen::Index>(grid_->size());
  CMatrix t(N, N);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
    Point q = grid_->point(i);
    for (Eigen::Index j = 0; j < N; ++j)
      t(static_cast<Eigen::Index>(i), j) = (*f_)(q, grid_->point(static_cast<std::size_t>(j)));
  });
  return t;
}

AlgebraElement AlgebraElement::tabulate() const {
  AlgebraElement e = from_table(grid_, table());
  e.radius_ = radius_;
  return e;
}

// ---------------------------------------------------------------- twist

TwistData TwistData::derived(const PhaseCochain& lambda) {
  if (lambda.degree() != 1) throw std::invalid_argument("twist: lambda must be a 1-cochain");
  return TwistData{lambda, coboundary(lambda)};
}

TwistData TwistData::supplied(const PhaseCochain& lambda, const PhaseCochain& omega, double tol, int samples,
                              std::uint64_t seed) {
  if (lambda.degree() != 1 || omega.degree() != 2) throw std::invalid_argument("twist: degrees (1, 2) required");
  PhaseCochain d = coboundary(lambda);
  std::mt19937_64 rng(seed);
  const BoxGrid& g = lambda.grid();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Point q = g.random_point(rng), x = g.random_point(rng), y = g.random_point(rng);
    worst = std::max(worst, std::abs(d(q, x, y) - omega(q, x, y)));
  }
  if (worst > tol) throw std::invalid_argument("twist: supplied omega is not delta(lambda) at the stated tolerance");
  return TwistData{lambda, omega};
}

TwistData TwistData::trivial(GridPtr grid) {
  return TwistData{PhaseCochain::constant(1, grid), PhaseCochain::constant(2, grid)};
}

// ---------------------------------------------------------------- algebra

AlgebraElement compose(const AlgebraElement& phi, const AlgebraElement& psi, const TwistData& twist,
                       const Endo& tau) {
  same_grid(phi, psi);
  same_grid(phi, twist);
  GridPtr g = phi.grid_ptr();
  tau.validate(*g);
  // Offsets y with phi(.; y) possibly non-zero. The set does not depend on x.
  auto ys = std::make_shared<std::vector<Point>>();
  for (const Point& y : g->offsets())
    if (g->is_exact() || within(y, phi.decay_radius())) ys->push_back(y);
  const double w = g->weight();
  PhaseCochain omega = twist.omega;
  AlgebraElement a = phi, b = psi;
  double radius = phi.decay_radius() + psi.decay_radius();
  return AlgebraElement(g, [=](const Point& q, const Point& x) {
    Complex s = 0.0;
    Point tx = tau.apply(*g, x);
    Point base = g->sub(q, tx);  // q - tau x
    for (const Point& y : *ys) {
      Point ty = tau.apply(*g, y);
      Point xmy = g->sub(x, y);
      Complex fa = a(g->add(q, g->sub(ty, tx)), y);
      if (fa == 0.0) continue;
      Complex fb = b(g->add(q, g->sub(y, ty)), xmy);
      if (fb == 0.0) continue;
      s += fa * fb * omega(base, y, xmy);
    }
    return w * s;
  }, radius);
}

AlgebraElement involute(const AlgebraElement& phi, const TwistData& twist, const Endo& tau) {
  same_grid(phi, twist);
  GridPtr g = phi.grid_ptr();
  tau.validate(*g);
  PhaseCochain omega = twist.omega;
  AlgebraElement a = phi;
  Endo one_minus_two = Endo::identity() - tau.times(2);
  return AlgebraElement(g, [=](const Point& q, const Point& x) {
    Point mx = g->neg(x);
    Complex w = omega(g->sub(q, tau.apply(*g, x)), x, mx);
    return std::conj(w) * std::conj(a(g->add(q, one_minus_two.apply(*g, x)), mx));
  }, phi.decay_radius());
}

double l1_norm(const AlgebraElement& phi) {
  const BoxGrid& g = phi.grid();
  double total = 0.0;
  for (const Point& x : g.offsets()) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(phi(g.point(i), x)));
    total += m;
  }
  return g.weight() * total;
}

AlgebraElement remap_tau(const AlgebraElement& phi, const Endo& tau, const Endo& tau_prime) {
  GridPtr g = phi.grid_ptr();
  tau.validate(*g);
  tau_prime.validate(*g);
  Endo diff = tau_prime - tau;
  AlgebraElement a = phi;
  return AlgebraElement(g, [=](const Point& q, const Point& x) { return a(g->add(q, diff.apply(*g, x)), x); },
                        phi.decay_radius());
}

OperatorMatrix represent(const AlgebraElement& phi, const TwistData& twist, const Endo& tau) {
  same_grid(phi, twist);
  const BoxGrid& g = phi.grid();
  tau.validate(g);
  auto N = static_cast<Eigen::Index>(g.size());
  OperatorMatrix M(N, N);
  const double w = g.weight();
  const PhaseCochain& lambda = twist.lambda;
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
    Point x = g.point(i);
    for (Eigen::Index j = 0; j < N; ++j) {
      Point y = g.point(static_cast<std::size_t>(j));
      Point z = g.sub(y, x);
      Complex v = phi(g.add(x, tau.apply(g, z)), z);
      M(static_cast<Eigen::Index>(i), j) = v == 0.0 ? Complex(0.0) : w * v * lambda(x, z);
    }
  });
  return M;
}

// ---------------------------------------------------------------- operators

OperatorMatrix multiplication_operator(const ScalarField& a, const BoxGrid& grid) {
  auto N = static_cast<Eigen::Index>(grid.size());
  OperatorMatrix M = OperatorMatrix::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) M(i, i) = a(grid.point(static_cast<std::size_t>(i)));
  return M;
}

OperatorMatrix position_operator(int k, const BoxGrid& grid) {
  return multiplication_operator(ScalarField([&grid, k](const Point& x) { return Complex(grid.physical(x)[k]); }), grid);
}

OperatorMatrix translation_operator(const PhaseCochain& lambda, const Point& y, std::size_t* truncated_rows) {
  const BoxGrid& g = lambda.grid();
  auto N = static_cast<Eigen::Index>(g.size());
  OperatorMatrix T = OperatorMatrix::Zero(N, N);
  std::size_t lost = 0;
  for (Eigen::Index i = 0; i < N; ++i) {
    Point x = g.point(static_cast<std::size_t>(i));
    auto j = g.locate(g.add(x, y));
    if (!j) {
      ++lost;
      continue;
    }
    T(i, static_cast<Eigen::Index>(*j)) = lambda(x, y);
  }
  if (truncated_rows) *truncated_rows = lost;
  return T;
}

OperatorMatrix magnetic_translation(const VectorPotential& A, const Point& y, GridPtr grid, const QuadratureRule& rule,
                                    std::size_t* truncated_rows) {
  return translation_operator(lambda_A(A, std::move(grid), rule), y, truncated_rows);
}

OperatorMatrix derivative_operator(int j, const BoxGrid& g, Derivative kind) {
  if (g.is_exact()) throw std::invalid_argument("derivative: truncated-box grid required");
  const int m = g.count(j);
  const double h = g.step(j);
  // 1-D stencil d(r) for row index a, column index a + r
  std::vector<Complex> stencil(2 * m - 1, 0.0);
  if (kind == Derivative::Spectral) {
    for (int r = -(m - 1); r <= m - 1; ++r) {
      Complex s = 0.0;
      for (int i = 0; i < m; ++i) {
        int k = i - m / 2;
        if (m % 2 == 0 && k == -m / 2) continue;  // Nyquist mode dropped for odd derivatives
        double p = 2.0 * kPi * k / (m * h);
        // u(x) = sum_k c_k e^{i p x}: (Du)(x_a) = sum_b d(b - a) u(x_b), d(r) = (1/M) sum_k i p e^{-i p r h}
        s += Complex(0.0, p) * unit_phase(-p * r * h);
      }
      stencil[r + m - 1] = s / static_cast<double>(m);
    }
  } else {
    stencil[m] = 1.0 / (2.0 * h);      // r = +1
    stencil[m - 2] = -1.0 / (2.0 * h); // r = -1
  }
  auto N = static_cast<Eigen::Index>(g.size());
  OperatorMatrix D = OperatorMatrix::Zero(N, N);
  for (Eigen::Index row = 0; row < N; ++row) {
    std::vector<int> idx = g.indices(static_cast<std::size_t>(row));
    int a = idx[j];
    for (int b = 0; b < m; ++b) {
      Complex v = stencil[b - a + m - 1];
      if (v == 0.0) continue;
      idx[j] = b;
      D(row, static_cast<Eigen::Index>(g.linear(idx))) = v;
    }
  }
  return D;
}

OperatorMatrix magnetic_momentum(const VectorPotential& A, int j, const BoxGrid& grid, Derivative kind) {
  OperatorMatrix P = Complex(0.0, -1.0) * derivative_operator(j, grid, kind);
  for (Eigen::Index i = 0; i < P.rows(); ++i) P(i, i) -= A.component(j, grid.point(static_cast<std::size_t>(i)));
  return P;
}

CVector apply_magnetic_momentum(const VectorPotential& A, int j, const BoxGrid& g, const CVector& u, Derivative kind) {
  if (g.is_exact()) throw std::invalid_argument("magnetic momentum: truncated-box grid required");
  auto N = static_cast<Eigen::Index>(g.size());
  CVector du(N);
  if (kind == Derivative::Spectral) {
    CVector uh = g.fourier(u, FourierDirection::Forward);
    const int m = g.count(j);
    for (Eigen::Index i = 0; i < N; ++i) {
      Point p = g.dual_point(static_cast<std::size_t>(i));
      std::vector<int> idx = g.indices(static_cast<std::size_t>(i));
      bool nyquist = m % 2 == 0 && idx[j] == 0;
      uh[i] *= nyquist ? Complex(0.0) : Complex(0.0, p[j]);
    }
    du = g.fourier(uh, FourierDirection::Inverse);
  } else {
    const double h = g.step(j);
    for (Eigen::Index i = 0; i < N; ++i) {
      std::vector<int> idx = g.indices(static_cast<std::size_t>(i));
      Complex s = 0.0;
      int a = idx[j];
      if (a + 1 < g.count(j)) {
        idx[j] = a + 1;
        s += u[static_cast<Eigen::Index>(g.linear(idx))];
      }
      if (a - 1 >= 0) {
        idx[j] = a - 1;
        s -= u[static_cast<Eigen::Index>(g.linear(idx))];
      }
      du[i] = s / (2.0 * h);
    }
  }
  CVector r(N);
  for (Eigen::Index i = 0; i < N; ++i)
    r[i] = Complex(0.0, -1.0) * du[i] - A.component(j, g.point(static_cast<std::size_t>(i))) * u[i];
  return r;
}

// ---------------------------------------------------------------- regular representation

namespace {
std::size_t doubled(const BoxGrid& g, std::size_t cap) {
  if (!g.is_exact()) throw std::invalid_argument("regular representation: exact-group grid required");
  std::size_t n = g.size() * g.size();
  if (n > cap) throw std::length_error("regular representation: doubled dimension exceeds the cap");
  return n;
}
}  // namespace

OperatorMatrix regular_intertwiner(const PhaseCochain& lambda, std::size_t cap) {
  const BoxGrid& g = lambda.grid();
  auto D = static_cast<Eigen::Index>(doubled(g, cap));
  const std::size_t N = g.size();
  OperatorMatrix W = OperatorMatrix::Zero(D, D);
  for (std::size_t s = 0; s < N; ++s) {
    Point ps = g.point(s);
    for (std::size_t t = 0; t < N; ++t) {
      Point pt = g.point(t);
      std::size_t col = s * N + g.index_of(g.add(ps, pt));
      W(static_cast<Eigen::Index>(s * N + t), static_cast<Eigen::Index>(col)) = lambda(ps, pt);
    }
  }
  return W;
}

OperatorMatrix regular_multiplication(const ScalarField& a, const BoxGrid& g, std::size_t cap) {
  auto D = static_cast<Eigen::Index>(doubled(g, cap));
  const std::size_t N = g.size();
  OperatorMatrix R = OperatorMatrix::Zero(D, D);
  for (std::size_t s = 0; s < N; ++s)
    for (std::size_t t = 0; t < N; ++t) {
      auto k = static_cast<Eigen::Index>(s * N + t);
      R(k, k) = a(g.add(g.point(s), g.point(t)));
    }
  return R;
}

OperatorMatrix regular_translation(const PhaseCochain& omega, const Point& z, std::size_t cap) {
  const BoxGrid& g = omega.grid();
  auto D = static_cast<Eigen::Index>(doubled(g, cap));
  const std::size_t N = g.size();
  OperatorMatrix T = OperatorMatrix::Zero(D, D);
  for (std::size_t s = 0; s < N; ++s) {
    Point ps = g.point(s);
    for (std::size_t t = 0; t < N; ++t) {
      Point pt = g.point(t);
      std::size_t col = s * N + g.index_of(g.add(pt, z));
      T(static_cast<Eigen::Index>(s * N + t), static_cast<Eigen::Index>(col)) = omega(ps, pt, z);
    }
  }
  return T;
}

OperatorMatrix identity_tensor(const OperatorMatrix& M) {
  const Eigen::Index n = M.rows();
  OperatorMatrix R = OperatorMatrix::Zero(n * n, n * n);
  for (Eigen::Index s = 0; s < n; ++s) R.block(s * n, s * n, n, n) = M;
  return R;
}

}  // namespace magweyl
