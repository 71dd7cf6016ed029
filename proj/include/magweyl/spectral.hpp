#pragma once

#include <cstdint>
#include <vector>

#include "magweyl/types.hpp"

namespace magweyl {

struct SpectrumResult {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns; empty unless requested
  double residual = 0.0;       // max ||H v - e v|| over reported pairs
};

bool is_hermitian(const CMatrix& H, double rel_tol = 1e-12);
double hermitian_defect(const CMatrix& H);  // ||H - H^H||_max / ||H||_max

// Symmetrized dense solve. Throws std::invalid_argument when the asymmetry exceeds
// herm_tol relative, or when the residual check fails.
SpectrumResult eigh(const CMatrix& H, bool want_vectors = false, double herm_tol = 1e-10);

// Hermitian band matrix, LAPACK upper storage: ab(kd + i - j, j) = H(i, j) for j - kd <= i <= j.
class BandedHermitian {
 public:
  BandedHermitian(Eigen::Index n, int kd);
  Eigen::Index size() const { return n_; }
  int bandwidth() const { return kd_; }
  // Stores H(i, j) for |i - j| <= kd; the mirrored entry is implied.
  void set(Eigen::Index i, Eigen::Index j, Complex v);
  Complex get(Eigen::Index i, Eigen::Index j) const;
  CMatrix dense() const;
  CMatrix& storage() { return ab_; }
  CMatrix storage_copy() const { return ab_; }

 private:
  Eigen::Index n_;
  int kd_;
  CMatrix ab_;
};

std::vector<double> eigvalsh_banded(const BandedHermitian& H);

struct NormOptions {
  double rel_tol = 1e-10;
  int max_iter = 20000;
  std::uint64_t seed = 0x5eed;
};
// Largest singular value by power iteration on M^H M. Deterministic: one run from
// the normalized all-ones vector, one from a fixed pseudo-random vector; the max is returned.
double operator_norm(const CMatrix& M, const NormOptions& opt = {});

struct Interval {
  double lo;
  double hi;
};

// Maximal runs of sorted values whose consecutive gaps are < threshold.
std::vector<Interval> extract_bands(const std::vector<double>& sorted, double gap_threshold);
// Sort by lo and merge intervals that overlap or are closer than threshold.
std::vector<Interval> merge_intervals(std::vector<Interval> v, double gap_threshold);
// Hausdorff distance between two finite unions of closed intervals.
double hausdorff(const std::vector<Interval>& a, const std::vector<Interval>& b);
// Bins of [lo, hi) whose normalized density (count / (n * width)) exceeds threshold, merged.
std::vector<Interval> histogram_support(const std::vector<double>& values, double lo, double hi, int bins,
                                        double density_threshold);

}  // namespace magweyl
