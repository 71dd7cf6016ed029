#include "magweyl/grid.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace magweyl {

namespace {

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

long nearest(double x) { return std::lround(x); }

// FFTW plans are cached per (shape, sign). Planning is not thread-safe, execution is.
struct PlanKey {
  std::vector<int> shape;
  int sign;
  bool operator<(const PlanKey& o) const {
    return shape != o.shape ? shape < o.shape : sign < o.sign;
  }
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(const std::vector<int>& shape, int sign) {
  static std::map<PlanKey, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(plan_mutex());
  PlanKey key{shape, sign};
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::size_t n = 1;
  for (int m : shape) n *= static_cast<std::size_t>(m);
  std::vector<fftw_complex> in(n), out(n);
  fftw_plan p = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), in.data(), out.data(),
                              sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(key, p);
  return p;
}

}  // namespace

BoxGrid BoxGrid::exact(std::vector<int> M, std::vector<double> L) {
  BoxGrid g;
  g.mode_ = GridMode::ExactGroup;
  g.d_ = static_cast<int>(M.size());
  g.M_ = std::move(M);
  if (L.empty())
    for (int m : g.M_) L.push_back(0.5 * m);  // unit step
  g.L_ = std::move(L);
  g.finish();
  return g;
}

BoxGrid BoxGrid::box(std::vector<int> M, std::vector<double> L) {
  BoxGrid g;
  g.mode_ = GridMode::TruncatedBox;
  g.d_ = static_cast<int>(M.size());
  g.M_ = std::move(M);
  g.L_ = std::move(L);
  g.finish();
  return g;
}

BoxGrid BoxGrid::lattice(int d, int R) {
  if (R < 1) throw std::invalid_argument("lattice grid: radius must be >= 1");
  BoxGrid g;
  g.mode_ = GridMode::TruncatedBox;
  g.lattice_ = true;
  g.d_ = d;
  g.M_.assign(d, 2 * R + 1);
  g.L_.assign(d, static_cast<double>(R));
  g.finish();
  return g;
}

void BoxGrid::finish() {
  if (d_ < 1 || d_ > kMaxDim) throw std::invalid_argument("grid: dimension must be in 1..3");
  if (static_cast<int>(L_.size()) != d_) throw std::invalid_argument("grid: M and L lengths differ");
  size_ = 1;
  weight_ = 1.0;
  dual_weight_ = 1.0;
  h_.resize(d_);
  origin_.resize(d_);
  for (int a = 0; a < d_; ++a) {
    if (M_[a] < 2) throw std::invalid_argument("grid: M must be >= 2 on every axis");
    if (!(L_[a] > 0.0)) throw std::invalid_argument("grid: L must be positive");
    h_[a] = lattice_ ? 1.0 : 2.0 * L_[a] / M_[a];
    origin_[a] = is_exact() ? 0.0 : (lattice_ ? -L_[a] : -L_[a]);
    size_ *= static_cast<std::size_t>(M_[a]);
    weight_ *= h_[a];
    dual_weight_ *= 1.0 / (M_[a] * h_[a]);
  }
  auto offs = std::make_shared<std::vector<Point>>();
  if (is_exact()) {
    offs->reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) offs->push_back(point(i));
  } else {
    std::vector<int> w(d_);
    std::size_t n = 1;
    for (int a = 0; a < d_; ++a) {
      w[a] = (M_[a] - 1) / 2;
      n *= static_cast<std::size_t>(2 * w[a] + 1);
    }
    offs->reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t rest = i;
      Point p(d_);
      for (int a = d_ - 1; a >= 0; --a) {
        std::size_t len = static_cast<std::size_t>(2 * w[a] + 1);
        long m = static_cast<long>(rest % len) - w[a];
        rest /= len;
        p[a] = m * h_[a];
      }
      offs->push_back(p);
    }
  }
  offsets_ = offs;
}

std::vector<int> BoxGrid::indices(std::size_t lin) const {
  std::vector<int> idx(d_);
  for (int a = d_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(lin % static_cast<std::size_t>(M_[a]));
    lin /= static_cast<std::size_t>(M_[a]);
  }
  return idx;
}

std::size_t BoxGrid::linear(const std::vector<int>& idx) const {
  std::size_t lin = 0;
  for (int a = 0; a < d_; ++a) lin = lin * static_cast<std::size_t>(M_[a]) + static_cast<std::size_t>(idx[a]);
  return lin;
}

Point BoxGrid::point_from_indices(const std::vector<int>& idx) const {
  Point p(d_);
  for (int a = 0; a < d_; ++a) {
    if (is_exact()) p[a] = idx[a];
    else if (lattice_) p[a] = static_cast<double>(idx[a]) - L_[a];
    else p[a] = -L_[a] + idx[a] * h_[a];  // from integers every time
  }
  return p;
}

Point BoxGrid::point(std::size_t lin) const { return point_from_indices(indices(lin)); }

std::optional<std::size_t> BoxGrid::locate(const Point& x) const {
  std::size_t lin = 0;
  for (int a = 0; a < d_; ++a) {
    long j;
    if (is_exact()) {
      long r = nearest(x[a]);
      if (std::abs(x[a] - r) > 1e-9) return std::nullopt;
      j = mod(r, M_[a]);
    } else {
      double t = (x[a] - origin_[a]) / h_[a];
      j = nearest(t);
      if (std::abs(t - j) > 1e-7 || j < 0 || j >= M_[a]) return std::nullopt;
    }
    lin = lin * static_cast<std::size_t>(M_[a]) + static_cast<std::size_t>(j);
  }
  return lin;
}

std::size_t BoxGrid::index_of(const Point& x) const {
  auto r = locate(x);
  if (!r) throw std::out_of_range("grid: point is not a grid point");
  return *r;
}

Point BoxGrid::physical(const Point& x) const {
  if (!is_exact()) return x;
  Point p = reduce(x);
  for (int a = 0; a < d_; ++a) p[a] *= h_[a];
  return p;
}

Point BoxGrid::reduce(const Point& x) const {
  if (!is_exact()) return x;
  Point r(d_);
  for (int a = 0; a < d_; ++a) r[a] = static_cast<double>(mod(nearest(x[a]), M_[a]));
  return r;
}

Point BoxGrid::add(const Point& x, const Point& y) const { return reduce(x + y); }
Point BoxGrid::sub(const Point& x, const Point& y) const { return reduce(x - y); }
Point BoxGrid::neg(const Point& x) const { return reduce(-x); }

Point BoxGrid::scale(long t, const Point& x) const {
  if (!is_exact()) return static_cast<double>(t) * x;
  Point r(d_);
  for (int a = 0; a < d_; ++a) r[a] = static_cast<double>(mod(mod(t, M_[a]) * nearest(x[a]), M_[a]));
  return r;
}

Point BoxGrid::scale(double t, const Point& x) const {
  if (is_exact()) throw std::invalid_argument("grid: real scaling is undefined on the exact group");
  return t * x;
}

bool BoxGrid::same(const Point& x, const Point& y, double tol) const {
  Point a = reduce(x), b = reduce(y);
  for (int i = 0; i < d_; ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

Point BoxGrid::dual_point(std::size_t lin) const {
  std::vector<int> idx = indices(lin);
  Point p(d_);
  for (int a = 0; a < d_; ++a) {
    long k = idx[a] - M_[a] / 2;
    p[a] = is_exact() ? static_cast<double>(k) : 2.0 * kPi * k / (M_[a] * h_[a]);
  }
  return p;
}

Point BoxGrid::momentum(const Point& dual) const {
  if (!is_exact()) return dual;
  Point p(d_);
  for (int a = 0; a < d_; ++a) {
    long k = mod(nearest(dual[a]), M_[a]);
    if (k >= (M_[a] + 1) / 2) k -= M_[a];
    p[a] = 2.0 * kPi * k / (M_[a] * h_[a]);
  }
  return p;
}

Point BoxGrid::dual_add(const Point& p, const Point& k) const { return is_exact() ? reduce(p + k) : p + k; }
Point BoxGrid::dual_neg(const Point& p) const { return is_exact() ? reduce(-p) : -p; }

Complex BoxGrid::character(const Point& dual, const Point& x) const {
  if (!is_exact()) return unit_phase(dot(dual, x));
  // integer pairing reduced mod M keeps the phase exact
  double turns = 0.0;
  for (int a = 0; a < d_; ++a) {
    long kj = mod(nearest(dual[a]) * nearest(x[a]), M_[a]);
    turns += static_cast<double>(kj) / M_[a];
  }
  return unit_phase(2.0 * kPi * turns);
}

bool BoxGrid::in_window(const Point& x) const {
  if (is_exact()) return true;
  for (int a = 0; a < d_; ++a) {
    double t = x[a] / h_[a];
    long m = nearest(t);
    if (std::abs(t - m) > 1e-7) return false;
    if (std::labs(m) > (M_[a] - 1) / 2) return false;
  }
  return true;
}

Point BoxGrid::random_point(std::mt19937_64& rng) const {
  Point p(d_);
  for (int a = 0; a < d_; ++a) {
    if (is_exact()) {
      p[a] = static_cast<double>(std::uniform_int_distribution<int>(0, M_[a] - 1)(rng));
    } else if (lattice_) {
      int R = static_cast<int>(L_[a]);
      p[a] = static_cast<double>(std::uniform_int_distribution<int>(-R, R)(rng));
    } else {
      p[a] = std::uniform_real_distribution<double>(-L_[a], L_[a])(rng);
    }
  }
  return p;
}

CVector BoxGrid::fourier(const CVector& u, FourierDirection dir) const {
  if (static_cast<std::size_t>(u.size()) != size_)
    throw std::invalid_argument("fourier: vector length does not match grid size");
  const bool fwd = dir == FourierDirection::Forward;
  // Per-axis phases. With k = i - c and x_j = x0 + j h:
  //   e^{-i p_k x_j} = e^{-i p_k x0} * e^{2 pi i c j / M} * e^{-2 pi i i j / M}
  std::vector<std::vector<Complex>> pre(d_), post(d_);
  for (int a = 0; a < d_; ++a) {
    int m = M_[a];
    int c = m / 2;
    pre[a].resize(m);
    post[a].resize(m);
    for (int j = 0; j < m; ++j) {
      double ang = 2.0 * kPi * static_cast<double>(static_cast<long>(c) * j % m) / m;
      pre[a][j] = unit_phase(fwd ? ang : -ang);
    }
    for (int i = 0; i < m; ++i) {
      double p = 2.0 * kPi * (i - c) / (m * h_[a]);
      double ang = -p * origin_[a];
      post[a][i] = unit_phase(fwd ? ang : -ang);
    }
  }
  std::vector<Complex> in(size_), out(size_);
  // forward: scale + pre-phase on x, FFT(-), post-phase on k
  // inverse: pre-phase (conj post) on k, FFT(+), post (conj pre) on x
  const auto& first = fwd ? pre : post;
  const auto& second = fwd ? post : pre;
  for (std::size_t i = 0; i < size_; ++i) {
    std::vector<int> idx = indices(i);
    Complex ph = 1.0;
    for (int a = 0; a < d_; ++a) ph *= first[a][idx[a]];
    in[i] = u[static_cast<Eigen::Index>(i)] * ph;
  }
  fftw_plan plan = get_plan(M_, fwd ? FFTW_FORWARD : FFTW_BACKWARD);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
  CVector r(static_cast<Eigen::Index>(size_));
  double scale = fwd ? weight_ : dual_weight_;
  for (std::size_t i = 0; i < size_; ++i) {
    std::vector<int> idx = indices(i);
    Complex ph = 1.0;
    for (int a = 0; a < d_; ++a) ph *= second[a][idx[a]];
    r[static_cast<Eigen::Index>(i)] = scale * out[i] * ph;
  }
  return r;
}

CVector BoxGrid::kernel_transform(const CVector& f) const {
  if (static_cast<std::size_t>(f.size()) != size_)
    throw std::invalid_argument("kernel_transform: vector length does not match grid size");
  std::vector<Complex> in(f.data(), f.data() + size_), out(size_);
  fftw_plan plan = get_plan(M_, FFTW_FORWARD);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
  // e^{-2 pi i (i - c) m / M} = e^{2 pi i c m / M} e^{-2 pi i i m / M}
  std::vector<std::vector<Complex>> ph(d_);
  for (int a = 0; a < d_; ++a) {
    int m = M_[a], c = m / 2;
    ph[a].resize(m);
    for (int j = 0; j < m; ++j)
      ph[a][j] = unit_phase(2.0 * kPi * static_cast<double>(static_cast<long>(c) * j % m) / m);
  }
  CVector r(static_cast<Eigen::Index>(size_));
  for (std::size_t i = 0; i < size_; ++i) {
    std::vector<int> idx = indices(i);
    Complex z = dual_weight_;
    for (int a = 0; a < d_; ++a) z *= ph[a][idx[a]];
    r[static_cast<Eigen::Index>(i)] = z * out[i];
  }
  return r;
}

std::size_t BoxGrid::dual_index(const Point& dual) const {
  std::size_t lin = 0;
  for (int a = 0; a < d_; ++a) {
    long k;
    if (is_exact()) {
      k = mod(nearest(dual[a]) + M_[a] / 2, M_[a]);
    } else {
      double t = dual[a] * M_[a] * h_[a] / (2.0 * kPi);
      long r = nearest(t);
      if (std::abs(t - r) > 1e-7) throw std::out_of_range("grid: momentum is not a dual grid point");
      k = r + M_[a] / 2;
      if (k < 0 || k >= M_[a]) throw std::out_of_range("grid: momentum outside the dual grid");
    }
    lin = lin * static_cast<std::size_t>(M_[a]) + static_cast<std::size_t>(k);
  }
  return lin;
}

Complex ScalarField::operator()(const Point& x) const {
  if (cache_) {
    if (auto i = cache_grid_->locate(x)) return (*cache_)[*i];
  }
  return f_(x);
}

ScalarField ScalarField::cached(const GridPtr& g) const {
  ScalarField r = *this;
  r.cache_grid_ = g;
  r.cache_ = std::make_shared<const std::vector<Complex>>(samples(*g));
  return r;
}

std::vector<Complex> ScalarField::samples(const BoxGrid& g) const {
  std::vector<Complex> s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s[i] = (*this)(g.point(i));
  return s;
}

ScalarField translate(const ScalarField& a, const Point& x, const GridPtr& g) {
  return ScalarField([a, x, g](const Point& y) { return a(g->add(y, x)); }, a.decay_radius());
}

}  // namespace magweyl
