#include "magweyl/weyl.hpp"

#include <stdexcept>

#include "magweyl/parallel.hpp"
#include "magweyl/spectral.hpp"

namespace magweyl {

namespace {

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// character matrix C(j, k) = chi_k(x_j)
CMatrix characters(const BoxGrid& g) {
  auto N = static_cast<Eigen::Index>(g.size());
  CMatrix C(N, N);
  for (Eigen::Index k = 0; k < N; ++k) {
    Point chi = g.dual_point(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < N; ++j) C(j, k) = g.character(chi, g.point(static_cast<std::size_t>(j)));
  }
  return C;
}

std::shared_ptr<const std::vector<Point>> dual_points(const BoxGrid& g) {
  auto v = std::make_shared<std::vector<Point>>();
  v->reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v->push_back(g.dual_point(k));
  return v;
}

// Representative of the offset x = m h with m_a folded into [-M_a/2, M_a/2); false for
// the residue M_a/2 of an even axis, which the symmetric window never reaches.
bool fold_into_window(const BoxGrid& g, const Point& x, Point& out) {
  out = Point(g.dim());
  for (int a = 0; a < g.dim(); ++a) {
    const long M = g.count(a);
    long m = std::lround(x[a] / g.step(a));
    long f = mod(m + M / 2, M) - M / 2;
    if (std::labs(f) > (M - 1) / 2) return false;
    out[a] = static_cast<double>(f) * g.step(a);
  }
  return true;
}

void require_box(const BoxGrid& g, const char* what) {
  if (g.is_exact() || g.is_lattice()) throw std::invalid_argument(std::string(what) + ": truncated-box grid required");
}

}  // namespace

// ---------------------------------------------------------------- Symbol

Symbol::Symbol(GridPtr grid, Eval f) : grid_(std::move(grid)), f_(std::make_shared<const Eval>(std::move(f))) {
  if (!grid_) throw std::invalid_argument("symbol: missing grid");
}

Symbol Symbol::tensor(GridPtr grid, std::function<Complex(const Point&)> a, std::function<Complex(const Point&)> b) {
  return Symbol(std::move(grid), [a = std::move(a), b = std::move(b)](const Point& q, const Point& p) {
    return a(q) * b(p);
  });
}

Symbol Symbol::from_table(GridPtr grid, const CMatrix& table) {
  if (!grid->is_exact()) throw std::invalid_argument("symbol table: exact-group grid required");
  if (static_cast<std::size_t>(table.rows()) != grid->size() || static_cast<std::size_t>(table.cols()) != grid->size())
    throw std::invalid_argument("symbol table: table must be N x N");
  auto t = std::make_shared<const CMatrix>(table);
  GridPtr g = grid;
  return Symbol(grid, [t, g](const Point& q, const Point& p) {
    return (*t)(static_cast<Eigen::Index>(g->index_of(q)), static_cast<Eigen::Index>(g->dual_index(p)));
  });
}

Symbol Symbol::without_source() const {
  Symbol s = *this;
  s.source_.reset();
  return s;
}

Symbol Symbol::with_source(const AlgebraElement& phi) const {
  Symbol s = *this;
  s.source_ = std::make_shared<const AlgebraElement>(phi);
  return s;
}

CMatrix Symbol::table() const {
  if (!grid_->is_exact()) throw std::invalid_argument("symbol table: exact-group grid required");
  auto N = static_cast<Eigen::Index>(grid_->size());
  CMatrix t(N, N);
  for (Eigen::Index k = 0; k < N; ++k) {
    Point p = grid_->dual_point(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < N; ++i) t(i, k) = (*f_)(grid_->point(static_cast<std::size_t>(i)), p);
  }
  return t;
}

// ---------------------------------------------------------------- partial Fourier

Symbol partial_fourier(const AlgebraElement& phi) {
  GridPtr g = phi.grid_ptr();
  if (g->is_exact()) {
    CMatrix T = g->weight() * (phi.table() * characters(*g));
    return Symbol::from_table(g, T).with_source(phi);
  }
  auto xs = std::make_shared<std::vector<Point>>();
  for (const Point& x : g->offsets()) {
    bool keep = true;
    if (std::isfinite(phi.decay_radius()))
      for (int a = 0; a < x.dim; ++a) keep = keep && std::abs(x[a]) <= phi.decay_radius() + 1e-12;
    if (keep) xs->push_back(x);
  }
  const double w = g->weight();
  AlgebraElement a = phi;
  Symbol s(g, [a, xs, w](const Point& q, const Point& p) {
    Complex acc = 0.0;
    for (const Point& x : *xs) acc += unit_phase(dot(p, x)) * a(q, x);
    return w * acc;
  });
  return s.with_source(phi);
}

AlgebraElement inverse_partial_fourier(const Symbol& f, KernelRange range) {
  GridPtr g = f.grid_ptr();
  if (const auto& src = f.source()) {
    if (g->is_exact()) return *src;
    AlgebraElement phi = *src;
    if (range == KernelRange::Window)
      return AlgebraElement(g, [phi, g](const Point& q, const Point& x) {
        return g->in_window(x) ? phi(q, x) : Complex(0.0);
      }, phi.decay_radius());
    return AlgebraElement(g, [phi, g](const Point& q, const Point& x) {
      Point r;
      return fold_into_window(*g, x, r) ? phi(q, r) : Complex(0.0);
    });
  }
  if (g->is_exact()) {
    CMatrix P = g->dual_weight() * (f.table() * characters(*g).adjoint());
    return AlgebraElement::from_table(g, P);
  }
  auto ps = dual_points(*g);
  const double wp = g->dual_weight();
  const bool window = range == KernelRange::Window;
  return AlgebraElement(g, [f, ps, wp, g, window](const Point& q, const Point& x) {
    if (window && !g->in_window(x)) return Complex(0.0);
    Complex acc = 0.0;
    for (const Point& p : *ps) acc += unit_phase(-dot(p, x)) * f(q, p);
    return wp * acc;
  });
}

Symbol moyal(const Symbol& f, const Symbol& g, const TwistData& twist, const Endo& tau, KernelRange range) {
  if (f.grid_ptr() != g.grid_ptr() && f.grid().size() != g.grid().size())
    throw std::invalid_argument("moyal: backend mismatch");
  return partial_fourier(compose(inverse_partial_fourier(f, range), inverse_partial_fourier(g, range), twist, tau));
}

Symbol symbol_involute(const Symbol& f, const TwistData& twist, const Endo& tau) {
  return partial_fourier(involute(inverse_partial_fourier(f), twist, tau));
}

Complex moyal_direct(const Symbol& f, const Symbol& g, const MagneticField& B, const PhasePoint& X,
                     const QuadratureRule& rule) {
  const BoxGrid& G = f.grid();
  require_box(G, "moyal_direct");
  const auto N = static_cast<Eigen::Index>(G.size());
  const int d = G.dim();
  const double w = G.weight(), wp = G.dual_weight();
  const Point& q = X.x;
  const Point& l = X.p;
  std::vector<Point> xs(N), ps(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    xs[i] = G.point(static_cast<std::size_t>(i));
    ps[i] = G.dual_point(static_cast<std::size_t>(i));
  }
  CMatrix Ft(N, N), Gt(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index k = 0; k < N; ++k) {
      Ft(i, k) = f(xs[i], ps[k]);
      Gt(i, k) = g(xs[i], ps[k]);
    }
  // E(k, z) = w' e^{2i (q - z).p_k}
  CMatrix E(N, N);
  for (Eigen::Index z = 0; z < N; ++z)
    for (Eigen::Index k = 0; k < N; ++k) E(k, z) = wp * unit_phase(2.0 * dot(q - xs[z], ps[k]));
  CMatrix Fh = Ft * E;            // Fh(y, z) = sum_p w' f(y, p) e^{2i(q-z).p}
  CMatrix Gh = Gt * E.conjugate();  // Gh(z, y) = sum_k w' g(z, k) e^{-2i(q-y).k}
  std::vector<Complex> outer(N);
  for (Eigen::Index y = 0; y < N; ++y) outer[y] = unit_phase(2.0 * dot(q - xs[y], l));
  Complex acc = 0.0;
  for (Eigen::Index y = 0; y < N; ++y) {
    for (Eigen::Index z = 0; z < N; ++z) {
      Complex v = Fh(y, z) * Gh(z, y);
      if (v == 0.0) continue;
      // triangle <q - y + z, y - z + q, z - q + y>
      Point a = q - xs[y] + xs[z], b = xs[y] - xs[z] + q, c = xs[z] - q + xs[y];
      double flux = flux_triangle(B, a, b - a, c - b, rule);
      acc += v * outer[y] * std::conj(outer[z]) * unit_phase(-flux);
    }
  }
  return std::pow(4.0, d) * w * w * acc;
}

// ---------------------------------------------------------------- quantization

OperatorMatrix quantize(const Symbol& f, const TwistData& twist, const Endo& tau, KernelRange range) {
  return represent(inverse_partial_fourier(f, range), twist, tau);
}

OperatorMatrix quantize_magnetic(const Symbol& f, const VectorPotential& A, GridPtr grid, const QuadratureRule& rule,
                                 KernelRange range) {
  TwistData t = TwistData::derived(lambda_A(A, std::move(grid), rule));
  return quantize(f, t, Endo::midpoint(), range);
}

OperatorMatrix op_momentum(const std::function<Complex(const Point&)>& b, const PhaseCochain& lambda,
                           KernelRange range) {
  const BoxGrid& g = lambda.grid();
  auto N = static_cast<Eigen::Index>(g.size());
  CVector bs(N);
  for (Eigen::Index k = 0; k < N; ++k) bs[k] = b(g.dual_point(static_cast<std::size_t>(k)));
  CVector h = g.kernel_transform(bs);
  OperatorMatrix M = OperatorMatrix::Zero(N, N);
  const double w = g.weight();
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
    std::vector<int> ix = g.indices(i);
    Point x = g.point(i);
    std::vector<int> m(g.dim());
    for (Eigen::Index j = 0; j < N; ++j) {
      std::vector<int> iy = g.indices(static_cast<std::size_t>(j));
      bool ok = true;
      for (int a = 0; a < g.dim(); ++a) {
        int delta = iy[a] - ix[a];
        if (!g.is_exact() && range == KernelRange::Window && std::abs(delta) > (g.count(a) - 1) / 2) ok = false;
        m[a] = static_cast<int>(mod(delta, g.count(a)));
      }
      if (!ok) continue;
      Complex hz = h[static_cast<Eigen::Index>(g.linear(m))];
      M(static_cast<Eigen::Index>(i), j) = w * hz * lambda(x, g.sub(g.point(static_cast<std::size_t>(j)), x));
    }
  });
  return M;
}

OperatorMatrix weyl_system(const PhasePoint& xi, const TwistData& twist, const Endo& tau) {
  const BoxGrid& g = twist.lambda.grid();
  tau.validate(g);
  auto N = static_cast<Eigen::Index>(g.size());
  OperatorMatrix W = OperatorMatrix::Zero(N, N);
  Point ty = tau.apply(g, xi.x);
  for (Eigen::Index i = 0; i < N; ++i) {
    Point x = g.point(static_cast<std::size_t>(i));
    auto j = g.locate(g.add(x, xi.x));
    if (!j) continue;
    W(i, static_cast<Eigen::Index>(*j)) = g.character(xi.p, g.sub(g.neg(x), ty)) * twist.lambda(x, xi.x);
  }
  return W;
}

CMatrix symplectic_fourier(const CMatrix& G, const BoxGrid& g) {
  if (!g.is_exact()) throw std::invalid_argument("symplectic_fourier: exact-group grid required");
  CMatrix C = characters(g);
  CMatrix G1 = g.dual_weight() * (G * C.adjoint());  // G1(y, x) = sum_kappa w' conj kappa(x) g(y, kappa)
  return g.weight() * (G1.transpose() * C);          // F(x, chi) = sum_y w chi(y) G1(y, x)
}

OperatorMatrix quantize_via_weyl(const Symbol& f, const TwistData& twist, const Endo& tau, std::size_t cap) {
  const BoxGrid& g = f.grid();
  if (!g.is_exact()) throw std::invalid_argument("quantize_via_weyl: exact-group grid required");
  if (g.size() > cap) throw std::length_error("quantize_via_weyl: grid volume exceeds the work cap");
  CMatrix coef = symplectic_fourier(f.table(), g);
  auto N = static_cast<Eigen::Index>(g.size());
  const double ww = g.weight() * g.dual_weight();
  OperatorMatrix M = OperatorMatrix::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index k = 0; k < N; ++k) {
      Complex c = ww * coef(i, k);
      if (c == 0.0) continue;
      PhasePoint xi{g.point(static_cast<std::size_t>(i)), g.dual_point(static_cast<std::size_t>(k))};
      M += c * weyl_system(xi, twist, tau);
    }
  return M;
}

Symbol exponential_symbol(const PhasePoint& xi0, GridPtr grid) {
  GridPtr g = grid;
  return Symbol(grid, [xi0, g](const Point& x, const Point& chi) {
    return g->character(chi, xi0.x) * std::conj(g->character(xi0.p, x));
  });
}

// ---------------------------------------------------------------- kernel factorization

namespace {

using PairPhase = std::function<Complex(const Point& x, const Point& y)>;

// K[x, y] = w h_s(y - x) phase(x, y), h_s = kernel_transform of f(q_s, .) at q_s = (x + y)/2.
OperatorMatrix midpoint_kernel(const std::function<Complex(const Point&, const Point&)>& f, const BoxGrid& g,
                               const PairPhase& phase, KernelRange range) {
  require_box(g, "magnetic_kernel");
  const int d = g.dim();
  auto N = static_cast<Eigen::Index>(g.size());
  std::vector<int> span(d);
  std::size_t S = 1;
  for (int a = 0; a < d; ++a) {
    span[a] = 2 * g.count(a) - 1;
    S *= static_cast<std::size_t>(span[a]);
  }
  auto ps = dual_points(g);
  const double w = g.weight();
  OperatorMatrix K = OperatorMatrix::Zero(N, N);
  // each (x, y) has exactly one index sum s, so tasks write disjoint entries
  parallel_for(S, [&](std::size_t lin) {
    std::vector<int> s(d);
    std::size_t rest = lin;
    for (int a = d - 1; a >= 0; --a) {
      s[a] = static_cast<int>(rest % static_cast<std::size_t>(span[a]));
      rest /= static_cast<std::size_t>(span[a]);
    }
    std::vector<int> lo(d), hi(d);
    bool any = true;
    for (int a = 0; a < d; ++a) {
      lo[a] = std::max(0, s[a] - (g.count(a) - 1));
      hi[a] = std::min(g.count(a) - 1, s[a]);
      if (range == KernelRange::Window) {
        // |2 i_x - s| <= (M - 1)/2
        int r = (g.count(a) - 1) / 2;
        lo[a] = std::max(lo[a], (s[a] - r + 1) / 2);
        hi[a] = std::min(hi[a], (s[a] + r) / 2);
        while (lo[a] <= hi[a] && std::abs(s[a] - 2 * lo[a]) > r) ++lo[a];
        while (hi[a] >= lo[a] && std::abs(s[a] - 2 * hi[a]) > r) --hi[a];
      }
      if (lo[a] > hi[a]) any = false;
    }
    if (!any) return;
    Point q(d);
    for (int a = 0; a < d; ++a) q[a] = -g.half_width(a) + 0.5 * s[a] * g.step(a);
    CVector fv(N);
    for (Eigen::Index k = 0; k < N; ++k) fv[k] = f(q, (*ps)[static_cast<std::size_t>(k)]);
    CVector h = g.kernel_transform(fv);
    std::vector<int> ix = lo, iy(d), m(d);
    while (true) {
      for (int a = 0; a < d; ++a) {
        iy[a] = s[a] - ix[a];
        m[a] = static_cast<int>(mod(iy[a] - ix[a], g.count(a)));
      }
      std::size_t r = g.linear(ix), c = g.linear(iy);
      Complex v = w * h[static_cast<Eigen::Index>(g.linear(m))];
      if (phase) v *= phase(g.point(r), g.point(c));
      K(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      int a = d - 1;
      while (a >= 0 && ix[a] == hi[a]) {
        ix[a] = lo[a];
        --a;
      }
      if (a < 0) break;
      ++ix[a];
    }
  });
  return K;
}

}  // namespace

OperatorMatrix magnetic_kernel(const Symbol& f, const VectorPotential& A, GridPtr grid, const QuadratureRule& rule,
                               KernelRange range) {
  PhaseCochain lambda = lambda_A(A, grid, rule);
  const BoxGrid& g = *grid;
  return midpoint_kernel([&f](const Point& q, const Point& p) { return f(q, p); }, g,
                         [&lambda, &g](const Point& x, const Point& y) { return lambda(x, g.sub(y, x)); }, range);
}

OperatorMatrix naive_minimal_coupling(const Symbol& f, const VectorPotential& A, GridPtr grid, KernelRange range) {
  return midpoint_kernel([&f, &A](const Point& q, const Point& p) { return f(q, p - A.value(q)); }, *grid, nullptr,
                         range);
}

OperatorMatrix conjugation_defect(const OperatorMatrix& M, const OperatorMatrix& Mp, const GaugeFunction& rho,
                                  const BoxGrid& g) {
  auto N = static_cast<Eigen::Index>(g.size());
  CVector e(N);
  for (Eigen::Index i = 0; i < N; ++i) e[i] = unit_phase(rho.value(g.point(static_cast<std::size_t>(i))));
  return e.asDiagonal() * M * e.conjugate().asDiagonal() - Mp;
}

GaugeDefects gauge_defects(const Symbol& f, const VectorPotential& A, const GaugeFunction& rho, GridPtr grid,
                           const QuadratureRule& rule, KernelRange range) {
  VectorPotential Ap = A.plus_gradient(rho);
  GaugeDefects d;
  {
    OperatorMatrix K = magnetic_kernel(f, A, grid, rule, range);
    OperatorMatrix Kp = magnetic_kernel(f, Ap, grid, rule, range);
    d.magnetic = operator_norm(conjugation_defect(K, Kp, rho, *grid));
  }
  {
    OperatorMatrix K = naive_minimal_coupling(f, A, grid, range);
    OperatorMatrix Kp = naive_minimal_coupling(f, Ap, grid, range);
    d.naive = operator_norm(conjugation_defect(K, Kp, rho, *grid));
  }
  return d;
}

}  // namespace magweyl
