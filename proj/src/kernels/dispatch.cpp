#include <atomic>

#include "magweyl/kernels.hpp"

namespace magweyl::kernels {

namespace {

bool detect() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect() ? Isa::Avx2 : Isa::Scalar};
  return isa;
}

}  // namespace

bool avx2_available() {
  static const bool ok = detect();
  return ok;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) return;
  current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

double max_abs_diff(const Complex* a, const Complex* b, std::size_t n) {
  return active_isa() == Isa::Avx2 ? avx2::max_abs_diff(a, b, n) : scalar::max_abs_diff(a, b, n);
}

void matvec(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y) {
  if (active_isa() == Isa::Avx2) avx2::matvec(A, rows, cols, x, y);
  else scalar::matvec(A, rows, cols, x, y);
}

void matvec_adjoint(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y) {
  if (active_isa() == Isa::Avx2) avx2::matvec_adjoint(A, rows, cols, x, y);
  else scalar::matvec_adjoint(A, rows, cols, x, y);
}

void pointwise_mul(const Complex* a, const Complex* b, Complex* out, std::size_t n) {
  if (active_isa() == Isa::Avx2) avx2::pointwise_mul(a, b, out, n);
  else scalar::pointwise_mul(a, b, out, n);
}

}  // namespace magweyl::kernels
