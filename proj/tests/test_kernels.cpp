#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "magweyl/kernels.hpp"

using namespace magweyl;
namespace k = magweyl::kernels;

namespace {

std::vector<Complex> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Complex> v(n);
  for (auto& z : v) z = Complex(nd(rng), nd(rng));
  return v;
}

double max_err(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("dispatch") {
  CHECK(std::string(k::isa_name(k::Isa::Scalar)) == "scalar");
  CHECK(std::string(k::isa_name(k::Isa::Avx2)) == "avx2");
  k::force_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  k::force_isa(k::Isa::Avx2);
  CHECK(k::active_isa() == (k::avx2_available() ? k::Isa::Avx2 : k::Isa::Scalar));
}

TEST_CASE("scalar reference kernels") {
  std::vector<Complex> a{{1.0, 2.0}, {0.0, -1.0}}, b{{1.0, 0.0}, {0.0, 3.0}};
  CHECK(k::scalar::max_abs_diff(a.data(), b.data(), 2) == doctest::Approx(4.0));
  std::vector<Complex> out(2);
  k::scalar::pointwise_mul(a.data(), b.data(), out.data(), 2);
  CHECK(out[1] == Complex(3.0, 0.0));
  // column-major 2x2 [[1, 2i], [3, 4]]
  std::vector<Complex> A{{1.0, 0.0}, {3.0, 0.0}, {0.0, 2.0}, {4.0, 0.0}};
  std::vector<Complex> x{{1.0, 0.0}, {0.0, 1.0}}, y(2);
  k::scalar::matvec(A.data(), 2, 2, x.data(), y.data());
  CHECK(y[0] == Complex(-1.0, 0.0));
  CHECK(y[1] == Complex(3.0, 4.0));
  k::scalar::matvec_adjoint(A.data(), 2, 2, x.data(), y.data());
  CHECK(y[0] == Complex(1.0, 3.0));
  CHECK(y[1] == Complex(0.0, 2.0));
}

TEST_CASE("AVX2 variants equal the scalar reference") {
  if (!k::avx2_available()) {
    MESSAGE("AVX2 not available; equivalence not exercised");
    return;
  }
  for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 64u, 1023u}) {
    auto a = random_vec(n, 1 + n), b = random_vec(n, 100 + n);
    // no FMA in either reduction: bitwise equal
    CHECK(k::avx2::max_abs_diff(a.data(), b.data(), n) == k::scalar::max_abs_diff(a.data(), b.data(), n));
    std::vector<Complex> s(n), v(n);
    k::scalar::pointwise_mul(a.data(), b.data(), s.data(), n);
    k::avx2::pointwise_mul(a.data(), b.data(), v.data(), n);
    double scale = 0.0;
    for (const auto& z : s) scale = std::max(scale, std::abs(z));
    CHECK(max_err(s, v) <= 1e-15 * std::max(1.0, scale));
  }
  for (auto [r, c] : {std::pair<std::size_t, std::size_t>{1, 1}, {5, 3}, {8, 8}, {33, 17}, {200, 51}}) {
    auto A = random_vec(r * c, r * 31 + c);
    auto x = random_vec(c, 7), w = random_vec(r, 8);
    std::vector<Complex> ys(r), yv(r), zs(c), zv(c);
    k::scalar::matvec(A.data(), r, c, x.data(), ys.data());
    k::avx2::matvec(A.data(), r, c, x.data(), yv.data());
    CHECK(max_err(ys, yv) < 1e-12 * std::sqrt(double(c)));
    k::scalar::matvec_adjoint(A.data(), r, c, w.data(), zs.data());
    k::avx2::matvec_adjoint(A.data(), r, c, w.data(), zv.data());
    CHECK(max_err(zs, zv) < 1e-12 * std::sqrt(double(r)));
  }
}

TEST_CASE("dispatching entry points follow the forced variant") {
  auto a = random_vec(37, 5), b = random_vec(37, 6);
  k::force_isa(k::Isa::Scalar);
  double s = k::max_abs_diff(a.data(), b.data(), 37);
  k::force_isa(k::Isa::Avx2);
  double v = k::max_abs_diff(a.data(), b.data(), 37);
  CHECK(s == v);
}
