#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>

#include <Eigen/Dense>

namespace magweyl {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
// Dense operator on l^2(grid); rows and columns follow the grid's linear order.
using OperatorMatrix = CMatrix;

inline constexpr int kMaxDim = 3;
inline constexpr double kPi = 3.14159265358979323846;

// Small fixed-capacity coordinate vector. In exact-group mode the entries are
// integer indices stored as doubles; in box and lattice mode they are coordinates.
struct Point {
  std::array<double, kMaxDim> c{};
  int dim = 0;

  Point() = default;
  explicit Point(int d) : dim(d) {
    if (d < 0 || d > kMaxDim) throw std::invalid_argument("Point: dimension out of range");
  }
  Point(std::initializer_list<double> v) : dim(static_cast<int>(v.size())) {
    if (dim > kMaxDim) throw std::invalid_argument("Point: dimension out of range");
    int a = 0;
    for (double x : v) c[a++] = x;
  }
  double& operator[](int a) { return c[a]; }
  double operator[](int a) const { return c[a]; }
};

inline Point operator+(const Point& a, const Point& b) {
  Point r(a.dim);
  for (int i = 0; i < a.dim; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}
inline Point operator-(const Point& a, const Point& b) {
  Point r(a.dim);
  for (int i = 0; i < a.dim; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}
inline Point operator-(const Point& a) {
  Point r(a.dim);
  for (int i = 0; i < a.dim; ++i) r.c[i] = -a.c[i];
  return r;
}
inline Point operator*(double s, const Point& a) {
  Point r(a.dim);
  for (int i = 0; i < a.dim; ++i) r.c[i] = s * a.c[i];
  return r;
}
inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
  return s;
}
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Pull a product of phases back onto the unit circle.
inline Complex renormalize(Complex z) {
  double r = std::abs(z);
  return r > 0.0 ? z / r : Complex(1.0, 0.0);
}

}  // namespace magweyl
