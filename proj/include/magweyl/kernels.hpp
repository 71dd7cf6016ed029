#pragma once

#include <cstddef>

#include "magweyl/types.hpp"

// Numeric inner loops. Each has a scalar reference and an AVX2 variant; the
// dispatching entry points pick one at runtime.
namespace magweyl::kernels {

enum class Isa { Scalar, Avx2 };

Isa active_isa();
bool avx2_available();
// Tests use this to pin a variant; passing Avx2 on a machine without it is ignored.
void force_isa(Isa isa);
const char* isa_name(Isa isa);

// max_i |a_i - b_i|
double max_abs_diff(const Complex* a, const Complex* b, std::size_t n);
// y = A x, A column-major rows x cols
void matvec(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y);
// y = A^H x
void matvec_adjoint(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y);
// out_i = a_i b_i
void pointwise_mul(const Complex* a, const Complex* b, Complex* out, std::size_t n);

namespace scalar {
double max_abs_diff(const Complex* a, const Complex* b, std::size_t n);
void matvec(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y);
void matvec_adjoint(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y);
void pointwise_mul(const Complex* a, const Complex* b, Complex* out, std::size_t n);
}  // namespace scalar

namespace avx2 {
double max_abs_diff(const Complex* a, const Complex* b, std::size_t n);
void matvec(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y);
void matvec_adjoint(const Complex* A, std::size_t rows, std::size_t cols, const Complex* x, Complex* y);
void pointwise_mul(const Complex* a, const Complex* b, Complex* out, std::size_t n);
}  // namespace avx2

}  // namespace magweyl::kernels
