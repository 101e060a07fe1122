#include "detail/linalg.hpp"

namespace ttp::detail {

namespace {

constexpr std::size_t kPairwiseBlock = 32;

double pairwise_sum_impl(const double* v, std::size_t n) noexcept {
  if (n <= kPairwiseBlock) return sum(v, n);
  const std::size_t half = n / 2;
  return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  return pairwise_sum_impl(values.data(), values.size());
}

double bilinear(const KernelMatrix& k, std::size_t u_off, std::span<const double> u,
                std::size_t v_off, std::span<const double> v) {
  thread_local std::vector<double> row_terms;
  row_terms.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    row_terms[i] = u[i] == 0.0 ? 0.0 : u[i] * dot(k.row_ptr(u_off + i) + v_off, v.data(), v.size());
  }
  return pairwise_sum(row_terms);
}

void matvec(const KernelMatrix& k, std::size_t row_off, std::size_t col_off,
            std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = dot(k.row_ptr(row_off + i) + col_off, x.data(), x.size());
  }
}

}  // namespace ttp::detail
