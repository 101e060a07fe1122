#pragma once

#include <cstddef>
#include <vector>

#include "ttp/kernels.hpp"
#include "ttp/mmd.hpp"
#include "ttp/rng.hpp"

namespace ttp {

enum class FusionMode { Equivalence, ClassicPermutation };

std::string_view to_string(FusionMode mode);
std::optional<FusionMode> parse_fusion_mode(std::string_view text);

struct FusionConfig {
  /// Equivalence radius. 0 is accepted as the never-merge limit.
  double theta = 0.4;
  double alpha = 0.05;
  std::size_t num_bootstrap = 1000;
  FusionMode mode = FusionMode::Equivalence;
  /// The fusion test needs the non-squared MMD, so only VStat is accepted.
  Estimator estimator = Estimator::VStat;
  Seed seed = 0;

  void validate() const;
  bool operator==(const FusionConfig&) const = default;
};

struct FusionOutcome {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool merged = false;
  FusionMode mode = FusionMode::Equivalence;
  std::size_t resamples_used = 0;

  bool operator==(const FusionOutcome&) const = default;
};

/// Bootstrap draws S^b = D_W(Q_c^m) + D_W~(Q_h^l), b = 1..B, in draw order.
std::vector<double> equivalence_bootstrap_draws(const GramCache& gram, const FusionConfig& cfg);

/// MMD equivalence test of H0: D(Q_c, Q_h) >= theta. Merges when
/// theta - D(Q_c^m, Q_h^l) exceeds the (1 - alpha) bootstrap quantile of S.
FusionOutcome equivalence_fusion(const GramCache& gram, const FusionConfig& cfg);

/// Permutation two-sample test of Q_c = Q_h; merges when it fails to reject.
FusionOutcome classic_fusion(const GramCache& gram, const FusionConfig& cfg);

FusionOutcome run_fusion(const GramCache& gram, const FusionConfig& cfg);

}  // namespace ttp
