#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "magweyl/cohomology.hpp"
#include "magweyl/spectral.hpp"

namespace magweyl {

struct RationalFlux {
  long p = 0;
  long q = 1;
  RationalFlux() = default;
  RationalFlux(long p, long q);  // reduced on construction
  double alpha() const { return static_cast<double>(p) / static_cast<double>(q); }
};

using LatticePoint = std::array<long, 2>;

inline LatticePoint operator+(LatticePoint a, LatticePoint b) { return {a[0] + b[0], a[1] + b[1]}; }
inline LatticePoint operator-(LatticePoint a, LatticePoint b) { return {a[0] - b[0], a[1] - b[1]}; }
inline LatticePoint operator-(LatticePoint a) { return {-a[0], -a[1]}; }

// exp(-i pi alpha (x1 y2 - x2 y1))
Complex omega_alpha(double alpha, LatticePoint x, LatticePoint y);

// Finitely supported phi: Z^2 -> C. Exact zeros are dropped.
class LatticeElement {
 public:
  LatticeElement() = default;
  static LatticeElement delta(LatticePoint x, Complex c = 1.0);

  Complex operator()(LatticePoint x) const;
  void add(LatticePoint x, Complex c);
  const std::map<LatticePoint, Complex>& terms() const { return v_; }
  bool empty() const { return v_.empty(); }
  long support_radius() const;  // max |x|_inf over the support
  double l1() const;

  LatticeElement operator+(const LatticeElement& o) const;
  LatticeElement operator*(Complex s) const;
  // max |phi(x) - psi(x)|
  double distance(const LatticeElement& o) const;

 private:
  std::map<LatticePoint, Complex> v_;
};

// (phi <> psi)(x) = sum_y omega_alpha(y, x) phi(y) psi(x - y)
LatticeElement twisted_convolve(const LatticeElement& phi, const LatticeElement& psi, double alpha);
// phi^(x) = conj phi(-x)
LatticeElement lattice_involute(const LatticeElement& phi);

LatticeElement generator_u();
LatticeElement generator_v();
// u + u* + nu (e^{2 pi i mu} v + e^{-2 pi i mu} v*); alpha only enters through the product.
LatticeElement almost_mathieu(double alpha, double nu, double mu);

// ω_alpha and lambda(q; x) = ω_alpha(q, x) as cochains on a lattice grid.
PhaseCochain omega_alpha_cochain(double alpha, GridPtr lattice_grid);
PhaseCochain lambda_alpha(double alpha, GridPtr lattice_grid);

// [Rep(phi) u](x) = sum_y omega(x, y) phi(y) u(x + y) on {-R..R}^2, open boundary.
// Index order matches BoxGrid::lattice(2, R).
CMatrix rep_lattice(const LatticeElement& phi, double alpha, int R, std::size_t cap = 4096);
// Same operator in band storage (phi must be self-adjoint); no dimension cap.
BandedHermitian rep_lattice_banded(const LatticeElement& phi, double alpha, int R);

struct BlochGenerators {
  CMatrix u;
  CMatrix v;
};
// u = e^{i theta1} S with S e_m = e_{m-1}, v = e^{i theta2} diag(e^{2 pi i p m / q}); uv = e^{2 pi i p/q} vu.
BlochGenerators bloch_generators(const RationalFlux& flux, double theta1, double theta2);
CMatrix bloch_harper(const RationalFlux& flux, double nu, double mu, double theta1, double theta2);

struct BandRow {
  long p;
  long q;
  double alpha;
  int band_index;
  double lo;
  double hi;
};

// Bands of bloch_harper over theta_j = 2 pi j / samples (both axes), for every reduced
// p/q with q <= q_max, 0 <= p < q, ordered by alpha then energy.
std::vector<BandRow> butterfly(int q_max, int samples, double nu, double mu, double gap = 1e-6);
std::vector<Interval> bloch_bands(const RationalFlux& flux, int samples, double nu, double mu, double gap = 1e-6);
std::string butterfly_csv(const std::vector<BandRow>& rows);

struct WeightedConvolutionOptions {
  int cutoff = 4;         // |z|_inf <= cutoff kept
  int samples = 64;       // torus points per axis for the coefficients
  double tail_tol = 1e-10;
};
// [op(b) u](x) = sum_y lambda(x; y - x) b_{y - x} u(y), b_z = (2 pi)^{-d} int b(theta) e^{-i theta.z}.
// lambda lives on a lattice grid of any dimension. Throws std::domain_error when the
// coefficient mass beyond the cutoff exceeds tail_tol.
CMatrix weighted_convolution_op(const std::function<Complex(const std::vector<double>&)>& b,
                                const PhaseCochain& lambda, const WeightedConvolutionOptions& opt = {});
// Coefficients b_z for |z|_inf <= samples/2 - 1, keyed by z (Z^2 only).
LatticeElement torus_coefficients(const std::function<Complex(const std::vector<double>&)>& b, int samples);

}  // namespace magweyl
