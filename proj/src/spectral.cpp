#include "magweyl/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <random>
#include <stdexcept>

#include "magweyl/kernels.hpp"

namespace magweyl {

double hermitian_defect(const CMatrix& H) {
  if (H.rows() != H.cols()) return INFINITY;
  double scale = H.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (H - H.adjoint()).cwiseAbs().maxCoeff() / scale;
}

bool is_hermitian(const CMatrix& H, double rel_tol) { return hermitian_defect(H) <= rel_tol; }

SpectrumResult eigh(const CMatrix& H, bool want_vectors, double herm_tol) {
  if (H.rows() == 0) throw std::invalid_argument("eigh: empty matrix");
  if (H.rows() != H.cols()) throw std::invalid_argument("eigh: matrix is not square");
  if (hermitian_defect(H) > herm_tol) throw std::invalid_argument("eigh: matrix is not Hermitian");
  CMatrix S = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(S, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigh: solver did not converge");
  SpectrumResult r;
  r.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  if (want_vectors) {
    r.vectors = es.eigenvectors();
    CMatrix res = S * r.vectors - r.vectors * es.eigenvalues().cast<Complex>().asDiagonal();
    r.residual = res.colwise().norm().maxCoeff();
    double scale = std::max(1.0, S.cwiseAbs().rowwise().sum().maxCoeff());
    if (r.residual > 1e-10 * scale) throw std::runtime_error("eigh: residual check failed");
  }
  return r;
}

BandedHermitian::BandedHermitian(Eigen::Index n, int kd) : n_(n), kd_(kd), ab_(CMatrix::Zero(kd + 1, n)) {
  if (n < 1 || kd < 0) throw std::invalid_argument("banded matrix: bad shape");
}

void BandedHermitian::set(Eigen::Index i, Eigen::Index j, Complex v) {
  if (std::abs(i - j) > kd_) throw std::out_of_range("banded matrix: entry outside the band");
  if (i <= j) ab_(kd_ + i - j, j) = v;
  else ab_(kd_ + j - i, i) = std::conj(v);
}

Complex BandedHermitian::get(Eigen::Index i, Eigen::Index j) const {
  if (std::abs(i - j) > kd_) return 0.0;
  return i <= j ? ab_(kd_ + i - j, j) : std::conj(ab_(kd_ + j - i, i));
}

CMatrix BandedHermitian::dense() const {
  CMatrix D = CMatrix::Zero(n_, n_);
  for (Eigen::Index j = 0; j < n_; ++j)
    for (Eigen::Index i = std::max<Eigen::Index>(0, j - kd_); i < std::min(n_, j + kd_ + 1); ++i) D(i, j) = get(i, j);
  return D;
}

std::vector<double> eigvalsh_banded(const BandedHermitian& H) {
  CMatrix ab = H.storage_copy();
  std::vector<double> w(static_cast<std::size_t>(H.size()));
  lapack_int info = LAPACKE_zhbev(LAPACK_COL_MAJOR, 'N', 'U', static_cast<lapack_int>(H.size()), H.bandwidth(),
                                  reinterpret_cast<lapack_complex_double*>(ab.data()),
                                  static_cast<lapack_int>(ab.rows()), w.data(), nullptr, 1);
  if (info != 0) throw std::runtime_error("eigvalsh_banded: LAPACK zhbev failed");
  return w;
}

namespace {

double power_run(const CMatrix& M, CVector v, const NormOptions& opt) {
  const auto rows = static_cast<std::size_t>(M.rows());
  const auto cols = static_cast<std::size_t>(M.cols());
  CVector t(M.rows()), w(M.cols());
  double nv = v.norm();
  if (nv == 0.0) return 0.0;
  v /= nv;
  double prev = -1.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    kernels::matvec(M.data(), rows, cols, v.data(), t.data());
    kernels::matvec_adjoint(M.data(), rows, cols, t.data(), w.data());
    double est = v.dot(w).real();  // Rayleigh quotient of M^H M
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (prev >= 0.0 && std::abs(est - prev) <= opt.rel_tol * std::abs(est)) return std::sqrt(std::max(est, 0.0));
    prev = est;
  }
  return std::sqrt(std::max(prev, 0.0));
}

}  // namespace

double operator_norm(const CMatrix& M, const NormOptions& opt) {
  if (M.size() == 0) return 0.0;
  CVector ones = CVector::Ones(M.cols());
  double a = power_run(M, ones, opt);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> n(0.0, 1.0);
  CVector r(M.cols());
  for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = Complex(n(rng), n(rng));
  double b = power_run(M, r, opt);
  return std::max(a, b);
}

std::vector<Interval> extract_bands(const std::vector<double>& v, double gap) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && v[i] < v[i - 1]) throw std::invalid_argument("extract_bands: input is not sorted");
    if (out.empty() || v[i] - out.back().hi >= gap) out.push_back({v[i], v[i]});
    else out.back().hi = v[i];
  }
  return out;
}

std::vector<Interval> merge_intervals(std::vector<Interval> v, double gap) {
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  });
  std::vector<Interval> out;
  for (const Interval& i : v) {
    if (out.empty() || i.lo - out.back().hi >= gap) out.push_back(i);
    else out.back().hi = std::max(out.back().hi, i.hi);
  }
  return out;
}

namespace {

double dist(double x, const std::vector<Interval>& s) {
  double d = INFINITY;
  for (const Interval& i : s) {
    if (x >= i.lo && x <= i.hi) return 0.0;
    d = std::min(d, x < i.lo ? i.lo - x : x - i.hi);
  }
  return d;
}

// sup_{x in a} dist(x, b): the distance is piecewise linear on each interval of a,
// so it peaks at an endpoint or at the midpoint of a gap of b.
double directed(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> bs = merge_intervals(b, 0.0);
  double m = 0.0;
  for (const Interval& i : a) {
    m = std::max({m, dist(i.lo, bs), dist(i.hi, bs)});
    for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
      double mid = 0.5 * (bs[k].hi + bs[k + 1].lo);
      if (mid >= i.lo && mid <= i.hi) m = std::max(m, dist(mid, bs));
    }
  }
  return m;
}

}  // namespace

double hausdorff(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  if (a.empty() || b.empty()) return (a.empty() && b.empty()) ? 0.0 : INFINITY;
  return std::max(directed(a, b), directed(b, a));
}

std::vector<Interval> histogram_support(const std::vector<double>& values, double lo, double hi, int bins,
                                        double threshold) {
  if (bins < 1 || !(hi > lo)) throw std::invalid_argument("histogram_support: bad binning");
  std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double e : values) {
    if (e < lo || e >= hi) continue;
    auto b = static_cast<std::size_t>((e - lo) / width);
    count[std::min(b, count.size() - 1)]++;
  }
  std::vector<Interval> out;
  const double n = static_cast<double>(values.size());
  for (int b = 0; b < bins; ++b) {
    if (static_cast<double>(count[b]) / (n * width) <= threshold) continue;
    Interval i{lo + b * width, lo + (b + 1) * width};
    if (!out.empty() && std::abs(out.back().hi - i.lo) < 1e-12 * width) out.back().hi = i.hi;
    else out.push_back(i);
  }
  return out;
}

}  // namespace magweyl
