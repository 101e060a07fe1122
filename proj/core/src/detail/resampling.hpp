#pragma once

// Index-space resampling engines. No kernel is evaluated inside a resampling
// loop: every statistic is assembled from rows of a precomputed kernel matrix.

#include <cstddef>
#include <span>
#include <vector>

#include "ttp/kernels.hpp"
#include "ttp/mmd.hpp"
#include "ttp/rng.hpp"

namespace ttp::detail {

/// Draws `count` indices uniformly with replacement from [begin, begin + size).
void draw_with_replacement(Rng& rng, std::size_t begin, std::size_t size, std::size_t count,
                           std::vector<std::size_t>& out);

/// Efron-bootstrap distance of one sample to itself:
/// D^2_W = (1/m^2) sum_ij (W_i - 1)(W_j - 1) k(x_i, x_j), W ~ Multinomial(m; 1/m ...),
/// evaluated for the block [begin, begin + size) of `k`.
class SelfBootstrap {
 public:
  SelfBootstrap(const KernelMatrix& k, std::size_t begin, std::size_t size);

  /// Squared distance for one multinomial draw (given as m category draws).
  double squared(std::span<const std::size_t> draws) const;

  double draw(Rng& rng) const;

 private:
  const KernelMatrix& k_;
  std::size_t begin_;
  std::size_t size_;
  std::vector<double> row_sums_;
  double total_;
  mutable std::vector<double> acc_;
  mutable std::vector<std::size_t> draws_;
};

/// Fixed sample joined to the first permuted group (partial permutation).
struct Ancillary {
  std::vector<double> cross_sums;  // sum over the fixed sample of k(p_i, h_j), per pooled i
  double self_sum = 0.0;
  double diag_sum = 0.0;
  std::size_t size = 0;
};

/// Two-sample permutation statistic over a pool P laid out as group A
/// (first `size_a` entries) then group B. With an ancillary sample H the
/// statistic is D^2(A u H, B).
class PermutationEngine {
 public:
  PermutationEngine(KernelMatrix block, std::size_t size_a, Estimator estimator,
                    Ancillary ancillary = {});

  /// Statistic for the labeling whose group A is `members` (positions into P).
  double statistic(std::span<const std::size_t> members) const;

  /// Identity labeling.
  double observed() const;

  /// `count` statistics under uniformly random relabelings.
  std::vector<double> permuted(std::size_t count, Rng& rng) const;

  std::size_t pool_size() const noexcept { return block_.size(); }

 private:
  KernelMatrix block_;
  std::size_t size_a_;
  Estimator estimator_;
  Ancillary ancillary_;
  std::vector<double> row_sums_;
  mutable std::vector<double> acc_;
  mutable std::vector<unsigned char> in_a_;
};

/// Partial bootstrap draws of sqrt(n) (D^2(T*, F*) - D^2(C*, F*)) where C* and
/// T* are drawn from the current block and H* from the historical block of the
/// pooled kernel matrix.
class PartialBootstrapEngine {
 public:
  PartialBootstrapEngine(const KernelMatrix& pooled, const Partition& partition,
                         Estimator estimator);

  double contrast(std::span<const std::size_t> current_draws,
                  std::span<const std::size_t> treatment_draws,
                  std::span<const std::size_t> historical_draws) const;

  double draw(Rng& rng) const;

 private:
  const KernelMatrix& k_;
  Partition partition_;
  Estimator estimator_;
  mutable std::vector<double> acc_c_, acc_t_, acc_h_;
  mutable std::vector<std::size_t> c_, t_, h_;
};

}  // namespace ttp::detail
