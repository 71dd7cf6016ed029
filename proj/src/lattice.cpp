#include "magweyl/lattice.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "magweyl/parallel.hpp"

namespace magweyl {

RationalFlux::RationalFlux(long p_, long q_) {
  if (q_ == 0) throw std::invalid_argument("flux: zero denominator");
  if (q_ < 0) {
    p_ = -p_;
    q_ = -q_;
  }
  long g = std::gcd(p_ < 0 ? -p_ : p_, q_);
  p = p_ / g;
  q = q_ / g;
}

Complex omega_alpha(double alpha, LatticePoint x, LatticePoint y) {
  const long wedge = x[0] * y[1] - x[1] * y[0];
  return unit_phase(-kPi * alpha * static_cast<double>(wedge));
}

// ---------------------------------------------------------------- elements

LatticeElement LatticeElement::delta(LatticePoint x, Complex c) {
  LatticeElement e;
  e.add(x, c);
  return e;
}

Complex LatticeElement::operator()(LatticePoint x) const {
  auto it = v_.find(x);
  return it == v_.end() ? Complex(0.0) : it->second;
}

void LatticeElement::add(LatticePoint x, Complex c) {
  if (c == 0.0) return;
  auto [it, fresh] = v_.emplace(x, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0.0) v_.erase(it);
  }
}

long LatticeElement::support_radius() const {
  long r = 0;
  for (const auto& [x, c] : v_) r = std::max({r, std::labs(x[0]), std::labs(x[1])});
  return r;
}

double LatticeElement::l1() const {
  double s = 0.0;
  for (const auto& [x, c] : v_) s += std::abs(c);
  return s;
}

LatticeElement LatticeElement::operator+(const LatticeElement& o) const {
  LatticeElement r = *this;
  for (const auto& [x, c] : o.v_) r.add(x, c);
  return r;
}

LatticeElement LatticeElement::operator*(Complex s) const {
  LatticeElement r;
  for (const auto& [x, c] : v_) r.add(x, s * c);
  return r;
}

double LatticeElement::distance(const LatticeElement& o) const {
  double m = 0.0;
  for (const auto& [x, c] : v_) m = std::max(m, std::abs(c - o(x)));
  for (const auto& [x, c] : o.v_) m = std::max(m, std::abs(c - (*this)(x)));
  return m;
}

LatticeElement twisted_convolve(const LatticeElement& phi, const LatticeElement& psi, double alpha) {
  LatticeElement r;
  for (const auto& [y, a] : phi.terms())
    for (const auto& [z, b] : psi.terms()) {
      LatticePoint x = y + z;
      r.add(x, omega_alpha(alpha, y, x) * a * b);
    }
  return r;
}

LatticeElement lattice_involute(const LatticeElement& phi) {
  LatticeElement r;
  for (const auto& [x, c] : phi.terms()) r.add(-x, std::conj(c));
  return r;
}

LatticeElement generator_u() { return LatticeElement::delta({1, 0}); }
LatticeElement generator_v() { return LatticeElement::delta({0, 1}); }

LatticeElement almost_mathieu(double /*alpha*/, double nu, double mu) {
  LatticeElement u = generator_u(), v = generator_v();
  Complex e = unit_phase(2.0 * kPi * mu);
  return u + lattice_involute(u) + (v * (nu * e) + lattice_involute(v) * (nu * std::conj(e)));
}

namespace {
LatticePoint to_lattice(const Point& x) { return {std::lround(x[0]), std::lround(x[1])}; }
}  // namespace

PhaseCochain omega_alpha_cochain(double alpha, GridPtr grid) {
  if (!grid->is_lattice() || grid->dim() != 2) throw std::invalid_argument("omega_alpha: Z^2 lattice grid required");
  return PhaseCochain(2, grid, [alpha](const Point&, std::span<const Point> x) {
    return omega_alpha(alpha, to_lattice(x[0]), to_lattice(x[1]));
  });
}

PhaseCochain lambda_alpha(double alpha, GridPtr grid) {
  if (!grid->is_lattice() || grid->dim() != 2) throw std::invalid_argument("lambda_alpha: Z^2 lattice grid required");
  return PhaseCochain(1, grid, [alpha](const Point& q, std::span<const Point> x) {
    return omega_alpha(alpha, to_lattice(q), to_lattice(x[0]));
  });
}

// ---------------------------------------------------------------- truncations

namespace {

void check_radius(const LatticeElement& phi, int R) {
  if (R < 1 || phi.support_radius() > R) throw std::invalid_argument("rep_lattice: box radius smaller than the support");
}

template <class Sink>
void rep_entries(const LatticeElement& phi, double alpha, int R, Sink&& sink) {
  const long n = 2L * R + 1;
  for (long x1 = -R; x1 <= R; ++x1)
    for (long x2 = -R; x2 <= R; ++x2) {
      long row = (x1 + R) * n + (x2 + R);
      for (const auto& [y, c] : phi.terms()) {
        long z1 = x1 + y[0], z2 = x2 + y[1];
        if (std::labs(z1) > R || std::labs(z2) > R) continue;
        sink(row, (z1 + R) * n + (z2 + R), omega_alpha(alpha, {x1, x2}, y) * c);
      }
    }
}

}  // namespace

CMatrix rep_lattice(const LatticeElement& phi, double alpha, int R, std::size_t cap) {
  check_radius(phi, R);
  const long n = 2L * R + 1;
  if (static_cast<std::size_t>(n * n) > cap) throw std::length_error("rep_lattice: dimension exceeds the dense cap");
  CMatrix M = CMatrix::Zero(n * n, n * n);
  rep_entries(phi, alpha, R, [&](long i, long j, Complex v) { M(i, j) += v; });
  return M;
}

BandedHermitian rep_lattice_banded(const LatticeElement& phi, double alpha, int R) {
  check_radius(phi, R);
  if (phi.distance(lattice_involute(phi)) > 1e-12) throw std::invalid_argument("rep_lattice_banded: element is not self-adjoint");
  const long n = 2L * R + 1;
  const long r = std::max(1L, phi.support_radius());
  BandedHermitian H(n * n, static_cast<int>(r * n + r));
  rep_entries(phi, alpha, R, [&](long i, long j, Complex v) {
    if (i <= j) H.set(i, j, H.get(i, j) + v);
  });
  return H;
}

// ---------------------------------------------------------------- Bloch reduction

BlochGenerators bloch_generators(const RationalFlux& flux, double t1, double t2) {
  const auto q = static_cast<Eigen::Index>(flux.q);
  BlochGenerators g{CMatrix::Zero(q, q), CMatrix::Zero(q, q)};
  Complex e1 = unit_phase(t1), e2 = unit_phase(t2);
  for (Eigen::Index m = 0; m < q; ++m) {
    g.u(m, (m + 1) % q) += e1;
    // phase 2 pi p m / q reduced mod q keeps the argument small
    long pm = (flux.p % flux.q + flux.q) % flux.q * m % flux.q;
    g.v(m, m) = e2 * unit_phase(2.0 * kPi * static_cast<double>(pm) / static_cast<double>(flux.q));
  }
  return g;
}

CMatrix bloch_harper(const RationalFlux& flux, double nu, double mu, double t1, double t2) {
  BlochGenerators g = bloch_generators(flux, t1, t2);
  Complex e = unit_phase(2.0 * kPi * mu);
  CMatrix H = g.u + g.u.adjoint() + nu * (e * g.v + std::conj(e) * g.v.adjoint());
  return 0.5 * (H + H.adjoint());
}

std::vector<Interval> bloch_bands(const RationalFlux& flux, int samples, double nu, double mu, double gap) {
  if (samples < 2) throw std::invalid_argument("bloch_bands: at least 2 theta samples per axis");
  const auto q = static_cast<std::size_t>(flux.q);
  std::vector<double> lo(q, INFINITY), hi(q, -INFINITY);
  Eigen::SelfAdjointEigenSolver<CMatrix> es;
  for (int a = 0; a < samples; ++a)
    for (int b = 0; b < samples; ++b) {
      double t1 = 2.0 * kPi * a / samples, t2 = 2.0 * kPi * b / samples;
      es.compute(bloch_harper(flux, nu, mu, t1, t2), Eigen::EigenvaluesOnly);
      for (std::size_t n = 0; n < q; ++n) {
        double e = es.eigenvalues()[static_cast<Eigen::Index>(n)];
        lo[n] = std::min(lo[n], e);
        hi[n] = std::max(hi[n], e);
      }
    }
  std::vector<Interval> iv;
  for (std::size_t n = 0; n < q; ++n) iv.push_back({lo[n], hi[n]});
  return merge_intervals(iv, gap);
}

std::vector<BandRow> butterfly(int q_max, int samples, double nu, double mu, double gap) {
  if (q_max < 1) throw std::invalid_argument("butterfly: q_max must be >= 1");
  std::vector<RationalFlux> fluxes;
  for (long q = 1; q <= q_max; ++q)
    for (long p = 0; p < q; ++p)
      if (std::gcd(p, q) == 1) fluxes.emplace_back(p, q);
  std::sort(fluxes.begin(), fluxes.end(), [](const RationalFlux& a, const RationalFlux& b) {
    return a.p * b.q < b.p * a.q;
  });
  std::vector<std::vector<Interval>> bands(fluxes.size());
  parallel_for(fluxes.size(), [&](std::size_t i) { bands[i] = bloch_bands(fluxes[i], samples, nu, mu, gap); });
  std::vector<BandRow> rows;
  for (std::size_t i = 0; i < fluxes.size(); ++i)
    for (std::size_t b = 0; b < bands[i].size(); ++b)
      rows.push_back({fluxes[i].p, fluxes[i].q, fluxes[i].alpha(), static_cast<int>(b), bands[i][b].lo, bands[i][b].hi});
  return rows;
}

std::string butterfly_csv(const std::vector<BandRow>& rows) {
  std::string out = "p,q,alpha,band_index,E_min,E_max\n";
  char buf[160];
  for (const BandRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%d,%.17g,%.17g\n", r.p, r.q, r.alpha, r.band_index, r.lo, r.hi);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------- weighted convolution

namespace {

// b_k for centred k on a Q^d torus grid, dual-linear order of BoxGrid::exact.
CVector torus_fourier(const std::function<Complex(const std::vector<double>&)>& b, const BoxGrid& T) {
  const auto N = static_cast<Eigen::Index>(T.size());
  CVector s(N);
  std::vector<double> theta(static_cast<std::size_t>(T.dim()));
  for (Eigen::Index i = 0; i < N; ++i) {
    std::vector<int> idx = T.indices(static_cast<std::size_t>(i));
    for (int a = 0; a < T.dim(); ++a) theta[a] = 2.0 * kPi * idx[a] / T.count(a);
    s[i] = b(theta);
  }
  // forward transform on the unit-step group: sum_j e^{-2 pi i j k / Q} s_j
  return T.fourier(s, FourierDirection::Forward) / static_cast<double>(N);
}

}  // namespace

LatticeElement torus_coefficients(const std::function<Complex(const std::vector<double>&)>& b, int samples) {
  BoxGrid T = BoxGrid::exact({samples, samples});
  CVector c = torus_fourier(b, T);
  LatticeElement e;
  for (std::size_t i = 0; i < T.size(); ++i) {
    Point k = T.dual_point(i);
    if (std::abs(k[0]) >= samples / 2 || std::abs(k[1]) >= samples / 2) continue;
    Complex v = c[static_cast<Eigen::Index>(i)];
    if (std::abs(v) > 1e-15) e.add({std::lround(k[0]), std::lround(k[1])}, v);
  }
  return e;
}

CMatrix weighted_convolution_op(const std::function<Complex(const std::vector<double>&)>& b,
                                const PhaseCochain& lambda, const WeightedConvolutionOptions& opt) {
  const BoxGrid& g = lambda.grid();
  if (!g.is_lattice()) throw std::invalid_argument("weighted_convolution_op: lattice grid required");
  if (opt.samples < 4 * opt.cutoff) throw std::invalid_argument("weighted_convolution_op: too few torus samples for the cutoff");
  const int d = g.dim();
  BoxGrid T = BoxGrid::exact(std::vector<int>(static_cast<std::size_t>(d), opt.samples));
  CVector c = torus_fourier(b, T);
  std::vector<std::pair<Point, Complex>> kept;
  double tail = 0.0;
  for (std::size_t i = 0; i < T.size(); ++i) {
    Point k = T.dual_point(i);
    double r = 0.0;
    for (int a = 0; a < d; ++a) r = std::max(r, std::abs(k[a]));
    Complex v = c[static_cast<Eigen::Index>(i)];
    if (r <= opt.cutoff) kept.emplace_back(k, v);
    else tail += std::abs(v);
  }
  if (tail > opt.tail_tol) throw std::domain_error("weighted_convolution_op: Fourier tail beyond the cutoff is too large");
  const auto N = static_cast<Eigen::Index>(g.size());
  CMatrix M = CMatrix::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    Point x = g.point(static_cast<std::size_t>(i));
    for (const auto& [z, v] : kept) {
      if (v == 0.0) continue;
      auto j = g.locate(x + z);
      if (!j) continue;
      M(i, static_cast<Eigen::Index>(*j)) = lambda(x, z) * v;
    }
  }
  return M;
}

}  // namespace magweyl
