#pragma once

// Dense kernels shared by the estimators and the resampling loops. All sums
// run in a fixed order so results are bit-stable for a given input.

#include <cstddef>
#include <span>
#include <vector>

#include "ttp/kernels.hpp"

namespace ttp::detail {

inline double dot(const double* a, const double* b, std::size_t n) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

inline double sum(const double* a, std::size_t n) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k];
    s1 += a[k + 1];
    s2 += a[k + 2];
    s3 += a[k + 3];
  }
  for (; k < n; ++k) s0 += a[k];
  return (s0 + s1) + (s2 + s3);
}

/// Tree summation; error grows with log(n) instead of n.
double pairwise_sum(std::span<const double> values) noexcept;

/// u' K[u_off.., v_off..] v, with u and v dense over contiguous index ranges.
double bilinear(const KernelMatrix& k, std::size_t u_off, std::span<const double> u,
                std::size_t v_off, std::span<const double> v);

/// y = K[row_off .. row_off+y.size(), col_off .. col_off+x.size()] x
void matvec(const KernelMatrix& k, std::size_t row_off, std::size_t col_off,
            std::span<const double> x, std::span<double> y) noexcept;

}  // namespace ttp::detail
