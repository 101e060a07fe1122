#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ttp/kernels.hpp"

namespace ttp {

enum class Estimator { VStat, UStat };

/// Positions into a kernel matrix. Duplicates are allowed and count with
/// multiplicity (bootstrap draws).
struct IndexSet {
  std::vector<std::size_t> indices;

  static IndexSet range(std::size_t begin, std::size_t count);
  static IndexSet concat(const IndexSet& a, const IndexSet& b);

  std::size_t size() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }
};

struct MMDValue {
  double squared = 0.0;
  Estimator estimator = Estimator::VStat;

  /// sqrt(max(squared, 0)).
  double root() const noexcept { return std::sqrt(squared > 0.0 ? squared : 0.0); }
};

/// Plug-in (biased) squared MMD between the empirical measures of a and b.
MMDValue mmd2_v(const KernelMatrix& k, const IndexSet& a, const IndexSet& b);
MMDValue mmd2_v(const GramCache& gram, const IndexSet& a, const IndexSet& b);

/// Unbiased squared MMD: within-sample sums skip i == j positions. Needs
/// |a|, |b| >= 2 and may be negative.
MMDValue mmd2_u(const KernelMatrix& k, const IndexSet& a, const IndexSet& b);
MMDValue mmd2_u(const GramCache& gram, const IndexSet& a, const IndexSet& b);

MMDValue mmd2(const KernelMatrix& k, const IndexSet& a, const IndexSet& b, Estimator estimator);

/// Squared MMD between the fused control (current | historical) and `other`.
/// The pooled empirical measure of the concatenation carries the mixture
/// weights m/(m+l) and l/(m+l). `historical` may be empty.
MMDValue mmd2_v_fused(const GramCache& gram, const IndexSet& current, const IndexSet& historical,
                      const IndexSet& other);
MMDValue mmd2_fused(const KernelMatrix& k, const IndexSet& current, const IndexSet& historical,
                    const IndexSet& other, Estimator estimator);

/// sqrt(n) * (D^2(fused, treatment) - D^2(fused, current)), the partial
/// bootstrap statistic. Exactly zero when `treatment` and `current` hold the
/// same index list.
double fused_contrast(const KernelMatrix& k, const IndexSet& current, const IndexSet& historical,
                      const IndexSet& treatment, Estimator estimator);

}  // namespace ttp
