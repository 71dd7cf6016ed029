#include <immintrin.h>

#include <algorithm>

#include "magweyl/kernels.hpp"

// Two complex doubles per 256-bit register, stored (re0, im0, re1, im1).
namespace magweyl::kernels::avx2 {

namespace {

inline __m256d load(const Complex* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store(Complex* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// (a.re b.re - a.im b.im, a.re b.im + a.im b.re) lane-wise
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d b_re = _mm256_movedup_pd(b);
  __m256d b_im = _mm256_permute_pd(b, 0xF);
  __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

// conj(a) * b
inline __m256d cmul_conj(__m256d a, __m256d b) {
  __m256d a_re = _mm256_movedup_pd(a);
  __m256d a_im = _mm256_permute_pd(a, 0xF);
  __m256d b_sw = _mm256_permute_pd(b, 0x5);
  // re: a.re b.re + a.im b.im ; im: a.re b.im - a.im b.re
  return _mm256_fmsubadd_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

}  // namespace

double max_abs_diff(const Complex* a, const Complex* b, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d d = _mm256_sub_pd(load(a + i), load(b + i));
    __m256d sq = _mm256_mul_pd(d, d);
    // re^2 + im^2 in both slots of each pair; no FMA so rounding matches scalar
    __m256d s = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));
    m = _mm256_max_pd(m, s);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, m);
  double r = std::max({buf[0], buf[1], buf[2], buf[3]});
  for (; i < n; ++i) {
    double re = a[i].real() - b[i].real();
    double im = a[i].imag() - b[i].imag();
    r = std::max(r, re * re + im * im);
  }
  return std::sqrt(r);
}

void matvec(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y) {
  std::fill(y, y + rows, Complex(0.0));
  for (std::size_t j = 0; j < cols; ++j) {
    const Complex* col = A + j * rows;
    const Complex xj = x[j];
    __m256d xv = _mm256_setr_pd(xj.real(), xj.imag(), xj.real(), xj.imag());
    std::size_t i = 0;
    for (; i + 2 <= rows; i += 2) store(y + i, _mm256_add_pd(load(y + i), cmul(load(col + i), xv)));
    for (; i < rows; ++i) y[i] += col[i] * xj;
  }
}

void matvec_adjoint(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y) {
  for (std::size_t j = 0; j < cols; ++j) {
    const Complex* col = A + j * rows;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= rows; i += 2) acc = _mm256_add_pd(acc, cmul_conj(load(col + i), load(x + i)));
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    Complex s(buf[0] + buf[2], buf[1] + buf[3]);
    for (; i < rows; ++i) s += std::conj(col[i]) * x[i];
    y[j] = s;
  }
}

void pointwise_mul(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store(out + i, cmul(load(a + i), load(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace magweyl::kernels::avx2
