#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "magweyl/types.hpp"

namespace magweyl {

enum class GridMode { ExactGroup, TruncatedBox };
enum class FourierDirection { Forward, Inverse };

// Finite model of the group X (and its dual). Three flavours:
//   exact    Z_M1 x ... x Z_Md, points are canonical index vectors, arithmetic mod M
//   box      real coordinates x = -L + j h, no wraparound
//   lattice  Z^d cut to {-R..R}^d, h = 1, integer coordinates, no wraparound
class BoxGrid {
 public:
  static BoxGrid exact(std::vector<int> M, std::vector<double> L = {});
  static BoxGrid box(std::vector<int> M, std::vector<double> L);
  static BoxGrid lattice(int d, int R);

  int dim() const { return d_; }
  GridMode mode() const { return mode_; }
  bool is_exact() const { return mode_ == GridMode::ExactGroup; }
  bool is_lattice() const { return lattice_; }
  int count(int a) const { return M_[a]; }
  double half_width(int a) const { return L_[a]; }
  double step(int a) const { return h_[a]; }
  std::size_t size() const { return size_; }
  double weight() const { return weight_; }
  double dual_weight() const { return dual_weight_; }

  // Linear order: axis 0 varies slowest.
  std::vector<int> indices(std::size_t linear) const;
  std::size_t linear(const std::vector<int>& idx) const;
  Point point(std::size_t linear) const;
  Point point_from_indices(const std::vector<int>& idx) const;
  std::optional<std::size_t> locate(const Point& x) const;
  std::size_t index_of(const Point& x) const;  // throws if off-grid

  // Physical coordinate of a group element (exact mode: j*h with canonical j).
  Point physical(const Point& x) const;

  Point zero() const { return Point(d_); }
  Point reduce(const Point& x) const;
  Point add(const Point& x, const Point& y) const;
  Point sub(const Point& x, const Point& y) const;
  Point neg(const Point& x) const;
  Point scale(long t, const Point& x) const;   // integer multiple
  Point scale(double t, const Point& x) const; // box/lattice only
  bool same(const Point& x, const Point& y, double tol = 1e-9) const;

  // Dual group. Momentum index k_a = i_a - floor(M_a/2) (centred).
  // Exact mode stores the integer k; box/lattice store p = 2 pi k / (M h).
  Point dual_point(std::size_t linear) const;
  Point momentum(const Point& dual) const;  // physical momentum
  Point dual_add(const Point& p, const Point& k) const;
  Point dual_neg(const Point& p) const;
  Complex character(const Point& dual, const Point& x) const;

  // Offsets used for internal group sums and kernel windows.
  // exact: the whole group. box/lattice: m h with |m_a| <= (M_a - 1)/2.
  const std::vector<Point>& offsets() const { return *offsets_; }
  bool in_window(const Point& x) const;

  Point random_point(std::mt19937_64& rng) const;

  // Unitary transform with measure weights:
  //   forward  u^(p) = w  sum_x  e^{-i x.p} u(x)
  //   inverse  u(x)  = w' sum_p  e^{+i x.p} u^(p)
  CVector fourier(const CVector& u, FourierDirection dir) const;
  // Kernel coefficients h[m] = w' sum_k e^{-i p_k.(m h)} f_k for every residue m
  // (linear order, m_a in [0, M_a)). f is indexed by dual linear index.
  CVector kernel_transform(const CVector& f) const;
  // Dual linear index of a dual point (exact mode accepts any representative mod M).
  std::size_t dual_index(const Point& dual) const;

 private:
  BoxGrid() = default;
  void finish();

  int d_ = 0;
  GridMode mode_ = GridMode::ExactGroup;
  bool lattice_ = false;
  std::vector<int> M_;
  std::vector<double> L_;
  std::vector<double> h_;
  std::vector<double> origin_;  // coordinate of index 0
  std::size_t size_ = 0;
  double weight_ = 1.0;
  double dual_weight_ = 1.0;
  std::shared_ptr<const std::vector<Point>> offsets_;
};

using GridPtr = std::shared_ptr<const BoxGrid>;
inline GridPtr share(BoxGrid g) { return std::make_shared<const BoxGrid>(std::move(g)); }

// Function X -> C with a declared decay radius and optional grid samples.
class ScalarField {
 public:
  using Eval = std::function<Complex(const Point&)>;

  ScalarField() = default;
  explicit ScalarField(Eval f, double decay_radius = INFINITY)
      : f_(std::move(f)), radius_(decay_radius) {}

  Complex operator()(const Point& x) const;
  double decay_radius() const { return radius_; }

  // Copy carrying samples on g; evaluation at grid points then reads the cache.
  ScalarField cached(const GridPtr& g) const;
  std::vector<Complex> samples(const BoxGrid& g) const;
  bool has_cache() const { return cache_ != nullptr; }

  static ScalarField constant(Complex c) {
    return ScalarField([c](const Point&) { return c; });
  }

 private:
  Eval f_;
  double radius_ = INFINITY;
  GridPtr cache_grid_;
  std::shared_ptr<const std::vector<Complex>> cache_;
};

// [theta_x a](y) = a(y + x), group addition taken from g.
ScalarField translate(const ScalarField& a, const Point& x, const GridPtr& g);

}  // namespace magweyl
