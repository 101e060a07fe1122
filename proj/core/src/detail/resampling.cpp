#include "detail/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail/linalg.hpp"

namespace ttp::detail {

namespace {

// acc[0..len) += row(j)[col_off .. col_off+len) for every j in rows.
// The matrix is symmetric, so this is K[.., rows] 1 restricted to the columns.
void accumulate_rows(const KernelMatrix& k, std::span<const std::size_t> rows, std::size_t col_off,
                     std::vector<double>& acc) {
  std::fill(acc.begin(), acc.end(), 0.0);
  double* out = acc.data();
  const std::size_t len = acc.size();
  for (std::size_t j : rows) {
    const double* src = k.row_ptr(j) + col_off;
    for (std::size_t i = 0; i < len; ++i) out[i] += src[i];
  }
}

double gather_sum(const std::vector<double>& values, std::span<const std::size_t> at,
                  std::size_t offset) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t q = 0;
  for (; q + 2 <= at.size(); q += 2) {
    s0 += values[at[q] - offset];
    s1 += values[at[q + 1] - offset];
  }
  if (q < at.size()) s0 += values[at[q] - offset];
  return s0 + s1;
}

}  // namespace

void draw_with_replacement(Rng& rng, std::size_t begin, std::size_t size, std::size_t count,
                           std::vector<std::size_t>& out) {
  out.resize(count);
  for (std::size_t& v : out) v = begin + rng.uniform_index(size);
}

SelfBootstrap::SelfBootstrap(const KernelMatrix& k, std::size_t begin, std::size_t size)
    : k_(k), begin_(begin), size_(size), row_sums_(size), acc_(size) {
  for (std::size_t i = 0; i < size; ++i) {
    row_sums_[i] = sum(k.row_ptr(begin + i) + begin, size);
  }
  total_ = pairwise_sum(row_sums_);
}

double SelfBootstrap::squared(std::span<const std::size_t> draws) const {
  // (W-1)'K(W-1) = W'KW - 2 W'K1 + 1'K1, with W'KW and W'K1 read off the draws.
  accumulate_rows(k_, draws, begin_, acc_);
  const double wkw = gather_sum(acc_, draws, begin_);
  const double wk1 = gather_sum(row_sums_, draws, begin_);
  const double m = static_cast<double>(size_);
  return (wkw - 2.0 * wk1 + total_) / (m * m);
}

double SelfBootstrap::draw(Rng& rng) const {
  draw_with_replacement(rng, begin_, size_, size_, draws_);
  return squared(draws_);
}

PermutationEngine::PermutationEngine(KernelMatrix block, std::size_t size_a, Estimator estimator,
                                     Ancillary ancillary)
    : block_(std::move(block)),
      size_a_(size_a),
      estimator_(estimator),
      ancillary_(std::move(ancillary)),
      row_sums_(block_.size()),
      acc_(block_.size()),
      in_a_(block_.size()) {
  for (std::size_t i = 0; i < block_.size(); ++i) row_sums_[i] = sum(block_.row_ptr(i), block_.size());
  if (ancillary_.cross_sums.empty()) ancillary_.cross_sums.assign(block_.size(), 0.0);
}

double PermutationEngine::statistic(std::span<const std::size_t> members) const {
  accumulate_rows(block_, members, 0, acc_);
  std::fill(in_a_.begin(), in_a_.end(), 0);
  for (std::size_t j : members) in_a_[j] = 1;

  double c_aa = 0.0, c_ab = 0.0, c_bb = 0.0;
  double h_a = 0.0, h_b = 0.0, d_a = 0.0, d_b = 0.0;
  const std::vector<double>& h = ancillary_.cross_sums;
  for (std::size_t i = 0; i < block_.size(); ++i) {
    const double kii = block_(i, i);
    if (in_a_[i]) {
      c_aa += acc_[i];
      h_a += h[i];
      d_a += kii;
    } else {
      c_ab += acc_[i];
      c_bb += row_sums_[i] - acc_[i];
      h_b += h[i];
      d_b += kii;
    }
  }
  const double c_ff = c_aa + 2.0 * h_a + ancillary_.self_sum;
  const double c_fb = c_ab + h_b;
  const double d_f = d_a + ancillary_.diag_sum;
  const double nf = static_cast<double>(members.size() + ancillary_.size);
  const double nb = static_cast<double>(block_.size() - members.size());

  if (estimator_ == Estimator::VStat) {
    return c_ff / (nf * nf) + c_bb / (nb * nb) - 2.0 * c_fb / (nf * nb);
  }
  return (c_ff - d_f) / (nf * (nf - 1.0)) + (c_bb - d_b) / (nb * (nb - 1.0)) -
         2.0 * c_fb / (nf * nb);
}

double PermutationEngine::observed() const {
  std::vector<std::size_t> members(size_a_);
  std::iota(members.begin(), members.end(), std::size_t{0});
  return statistic(members);
}

std::vector<double> PermutationEngine::permuted(std::size_t count, Rng& rng) const {
  const std::size_t n = block_.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t b = 0; b < count; ++b) {
    // Partial Fisher-Yates: the first size_a entries become a uniform subset.
    for (std::size_t i = 0; i < size_a_; ++i) {
      const std::size_t j = i + rng.uniform_index(n - i);
      std::swap(order[i], order[j]);
    }
    out.push_back(statistic(std::span<const std::size_t>(order.data(), size_a_)));
  }
  return out;
}

PartialBootstrapEngine::PartialBootstrapEngine(const KernelMatrix& pooled,
                                               const Partition& partition, Estimator estimator)
    : k_(pooled),
      partition_(partition),
      estimator_(estimator),
      acc_c_(partition.current),
      acc_t_(partition.current),
      acc_h_(partition.current) {}

double PartialBootstrapEngine::contrast(std::span<const std::size_t> current_draws,
                                        std::span<const std::size_t> treatment_draws,
                                        std::span<const std::size_t> historical_draws) const {
  // All draws index rows of the pooled matrix; C* and T* live in the current
  // block, so K restricted to current columns is all that is needed.
  accumulate_rows(k_, current_draws, 0, acc_c_);
  accumulate_rows(k_, treatment_draws, 0, acc_t_);
  accumulate_rows(k_, historical_draws, 0, acc_h_);

  const double c_cc = gather_sum(acc_c_, current_draws, 0);
  const double c_tc = gather_sum(acc_c_, treatment_draws, 0);
  const double c_tt = gather_sum(acc_t_, treatment_draws, 0);
  const double c_ch = gather_sum(acc_h_, current_draws, 0);
  const double c_th = gather_sum(acc_h_, treatment_draws, 0);

  const double m = static_cast<double>(current_draws.size());
  const double n = static_cast<double>(treatment_draws.size());
  const double fused = m + static_cast<double>(historical_draws.size());

  double within_t = 0.0;
  double within_c = 0.0;
  if (estimator_ == Estimator::VStat) {
    within_t = c_tt / (n * n);
    within_c = c_cc / (m * m);
  } else {
    double d_t = 0.0, d_c = 0.0;
    for (std::size_t i : treatment_draws) d_t += k_(i, i);
    for (std::size_t i : current_draws) d_c += k_(i, i);
    within_t = (c_tt - d_t) / (n * (n - 1.0));
    within_c = (c_cc - d_c) / (m * (m - 1.0));
  }
  const double c_tf = c_tc + c_th;
  const double c_cf = c_cc + c_ch;
  return std::sqrt(n) * (within_t - within_c - 2.0 * (c_tf / n - c_cf / m) / fused);
}

double PartialBootstrapEngine::draw(Rng& rng) const {
  draw_with_replacement(rng, partition_.current_begin(), partition_.current, partition_.current, c_);
  draw_with_replacement(rng, partition_.current_begin(), partition_.current, partition_.treatment, t_);
  draw_with_replacement(rng, partition_.historical_begin(), partition_.historical,
                        partition_.historical, h_);
  return contrast(c_, t_, h_);
}

}  // namespace ttp::detail
