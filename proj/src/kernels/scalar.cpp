#include <algorithm>

#include "magweyl/kernels.hpp"

namespace magweyl::kernels::scalar {

double max_abs_diff(const Complex* a, const Complex* b, std::size_t n) {
  // max of squared moduli, one sqrt at the end: both variants round identically
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double re = a[i].real() - b[i].real();
    double im = a[i].imag() - b[i].imag();
    m = std::max(m, re * re + im * im);
  }
  return std::sqrt(m);
}

void matvec(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y) {
  std::fill(y, y + rows, Complex(0.0));
  for (std::size_t j = 0; j < cols; ++j) {
    const Complex xj = x[j];
    const Complex* col = A + j * rows;
    for (std::size_t i = 0; i < rows; ++i) y[i] += col[i] * xj;
  }
}

void matvec_adjoint(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y) {
  for (std::size_t j = 0; j < cols; ++j) {
    const Complex* col = A + j * rows;
    Complex s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += std::conj(col[i]) * x[i];
    y[j] = s;
  }
}

void pointwise_mul(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace magweyl::kernels::scalar
