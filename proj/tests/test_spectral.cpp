#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "magweyl/spectral.hpp"

using namespace magweyl;

namespace {

CMatrix random_matrix(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CMatrix A(n, m);
  for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = Complex(nd(rng), nd(rng));
  return A;
}

}  // namespace

TEST_CASE("eigh on a known spectrum") {
  CMatrix Q = random_matrix(6, 6, 1).householderQr().householderQ();
  Eigen::VectorXd l(6);
  l << 3.0, -1.0, 0.5, 2.0, -4.0, 0.0;
  CMatrix H = Q * l.cast<Complex>().asDiagonal() * Q.adjoint();
  SpectrumResult r = eigh(H, true);
  std::vector<double> want{-4.0, -1.0, 0.0, 0.5, 2.0, 3.0};
  for (int i = 0; i < 6; ++i) CHECK(r.values[i] == doctest::Approx(want[i]).epsilon(1e-12));
  CHECK(r.vectors.cols() == 6);
  CHECK(r.residual < 1e-12);
}

TEST_CASE("eigh rejects non-Hermitian input") {
  CMatrix A = random_matrix(4, 4, 2);
  CHECK_FALSE(is_hermitian(A));
  CHECK_THROWS_AS(eigh(A), std::invalid_argument);
  CMatrix H = A + A.adjoint();
  CHECK(is_hermitian(H));
  CHECK(hermitian_defect(H) < 1e-15);
}

TEST_CASE("banded solver agrees with the dense one") {
  const Eigen::Index n = 30;
  BandedHermitian B(n, 3);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = std::max<Eigen::Index>(0, j - 3); i <= j; ++i)
      B.set(i, j, i == j ? Complex(nd(rng), 0.0) : Complex(nd(rng), nd(rng)));
  CMatrix D = B.dense();
  CHECK(is_hermitian(D));
  CHECK(B.get(5, 3) == std::conj(B.get(3, 5)));
  std::vector<double> a = eigvalsh_banded(B), b = eigh(D).values;
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  CHECK_THROWS(B.set(0, 10, 1.0));
}

TEST_CASE("operator norm equals the largest singular value") {
  for (auto [n, m] : {std::pair<int, int>{5, 5}, {7, 3}, {2, 9}}) {
    CMatrix A = random_matrix(n, m, 4 + n);
    Eigen::JacobiSVD<CMatrix> svd(A);
    CHECK(operator_norm(A) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-9));
  }
  CHECK(operator_norm(CMatrix::Zero(3, 3)) == 0.0);
  // all-ones start vector orthogonal to the top singular vector
  CMatrix D = CMatrix::Zero(2, 2);
  D(0, 0) = 1.0;
  D(0, 1) = -1.0;
  D(1, 0) = 0.1;
  D(1, 1) = 0.1;
  Eigen::JacobiSVD<CMatrix> svd(D);
  CHECK(operator_norm(D) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-9));
}

TEST_CASE("band extraction and merging") {
  std::vector<double> v{-2.0, -1.9, -1.85, 0.0, 0.05, 3.0};
  auto b = extract_bands(v, 0.2);
  REQUIRE(b.size() == 3);
  CHECK(b[0].lo == -2.0);
  CHECK(b[0].hi == -1.85);
  CHECK(b[2].lo == 3.0);
  auto m = merge_intervals({{0.0, 1.0}, {2.0, 3.0}, {0.5, 1.5}, {1.5 + 1e-9, 1.7}}, 1e-6);
  REQUIRE(m.size() == 2);
  CHECK(m[0].hi == 1.7);
}

TEST_CASE("Hausdorff distance between interval unions") {
  std::vector<Interval> a{{0.0, 1.0}}, b{{0.0, 0.4}, {0.6, 1.0}};
  CHECK(hausdorff(a, b) == doctest::Approx(0.1));
  CHECK(hausdorff(b, a) == doctest::Approx(0.1));
  CHECK(hausdorff(a, a) == 0.0);
  CHECK(hausdorff({{0.0, 1.0}}, {{0.0, 1.0}, {3.0, 3.0}}) == doctest::Approx(2.0));
}

TEST_CASE("histogram support") {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i) v.push_back(-1.0 + 0.5 * i / 999.0);
  for (int i = 0; i < 1000; ++i) v.push_back(1.0 + 1.0 * i / 999.0);
  v.push_back(0.3);  // isolated value below the density threshold
  auto s = histogram_support(v, -2.0, 3.0, 100, 0.05);
  REQUIRE(s.size() == 2);
  CHECK(s[0].lo == doctest::Approx(-1.0));
  CHECK(s[0].hi == doctest::Approx(-0.5));
  CHECK(s[1].hi == doctest::Approx(2.0).epsilon(0.03));
}
