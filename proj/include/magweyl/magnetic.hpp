#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "magweyl/cohomology.hpp"

namespace magweyl {

// Composite Gauss-Legendre rule on [0, 1].
class QuadratureRule {
 public:
  explicit QuadratureRule(int nodes = 16, int panels = 1);
  int node_count() const { return nodes_; }
  int panel_count() const { return panels_; }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& weights() const { return w_; }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) s += w_[i] * f(x_[i]);
    return s;
  }

 private:
  int nodes_;
  int panels_;
  std::vector<double> x_;
  std::vector<double> w_;
};

// B_jk(x) = amplitude * exp(-(|x_j - c_j|^2 + |x_k - c_k|^2) / (2 w^2)), constant along the
// remaining axes, so each bump is a closed 2-form in any dimension.
struct GaussianBump {
  Point center;
  double width = 1.0;
  int j = 0;
  int k = 1;
  double amplitude = 0.0;
};

class MagneticField {
 public:
  explicit MagneticField(int d);
  MagneticField(const Eigen::MatrixXd& constant, std::vector<GaussianBump> bumps = {});

  int dim() const { return d_; }
  double component(int j, int k, const Point& x) const;
  // Upper triangle of the constant part (antisymmetry fixed by construction).
  double constant_part(int j, int k) const;
  const std::vector<GaussianBump>& bumps() const { return bumps_; }
  bool is_constant() const { return bumps_.empty(); }

  static MagneticField from_json(const nlohmann::json& spec, int d);

 private:
  int d_;
  std::vector<double> upper_;  // row-major strict upper triangle
  std::vector<GaussianBump> bumps_;
};

// Smooth real gauge function with analytic gradient:
//   rho(x) = c.x + x.Q.x / 2 + sum_i a_i sin(k_i.x + phase_i)
struct GaugeFunction {
  int dim = 0;
  std::vector<double> linear;
  Eigen::MatrixXd quadratic;
  struct Wave {
    double amplitude;
    Point k;
    double phase;
  };
  std::vector<Wave> waves;

  static GaugeFunction zero(int d);
  static GaugeFunction from_json(const nlohmann::json& spec, int d);
  double value(const Point& x) const;
  Point gradient(const Point& x) const;
  bool is_zero() const;
};

class VectorPotential {
 public:
  using Component = std::function<double(const Point&)>;

  VectorPotential(int d, std::vector<Component> comps);
  static VectorPotential zero(int d);
  static VectorPotential constant(const Point& a);

  int dim() const { return static_cast<int>(comps_.size()); }
  double component(int j, const Point& x) const { return comps_[j](x); }
  Point value(const Point& x) const;
  VectorPotential plus_gradient(const GaugeFunction& rho) const;

 private:
  std::vector<Component> comps_;
};

// Gamma^B(<q, q+x, q+x+y>) = sum_jk x_j y_k int_0^1 dt int_0^1 ds s B_jk(q + s x + s t y).
double flux_triangle(const MagneticField& B, const Point& q, const Point& x, const Point& y,
                     const QuadratureRule& rule = QuadratureRule());
// Gamma^A([x, y]) = (y - x) . int_0^1 A(x + s (y - x)) ds.
double circulation(const VectorPotential& A, const Point& x, const Point& y,
                   const QuadratureRule& rule = QuadratureRule());
// A_j(x) = -sum_k int_0^1 ds B_jk(s x) s x_k
VectorPotential transversal_gauge(const MagneticField& B, const QuadratureRule& rule = QuadratureRule());

// Cochains on a box grid (points are physical coordinates). On an exact grid
// the physical coordinates of the canonical representatives are used.
PhaseCochain omega_B(const MagneticField& B, GridPtr grid, const QuadratureRule& rule = QuadratureRule());
PhaseCochain lambda_A(const VectorPotential& A, GridPtr grid, const QuadratureRule& rule = QuadratureRule());

// Fourth-order central-difference curl d_j A_k - d_k A_j.
double curl_fd(const VectorPotential& A, int j, int k, const Point& x, double step = 1e-3);
// Cyclic sum d_j B_kl + d_l B_jk + d_k B_lj by central differences (d >= 3).
double closedness_fd(const MagneticField& B, int j, int k, int l, const Point& x, double step = 1e-3);

}  // namespace magweyl
