#pragma once

#include <cstdint>
#include <optional>

#include "ttp/causality.hpp"
#include "ttp/fusion.hpp"
#include "ttp/kernels.hpp"

namespace ttp {

struct TTPConfig {
  KernelSpec kernel = KernelSpec::rbf_median();
  FusionConfig fusion;
  /// alpha, num_resamples and estimator apply to both branches. The method
  /// field is ignored: it is set per branch from merged_method.
  CausalityConfig causality;
  CausalityMethod merged_method = CausalityMethod::PartialBootstrap;
  /// Stage seeds are derived from this via derive_seed(master, "fusion" | "causality", stream).
  Seed master_seed = 0;

  void validate() const;
  bool operator==(const TTPConfig&) const = default;
};

struct SeedRecord {
  Seed master = 0;
  std::uint64_t stream = 0;
  Seed fusion = 0;
  Seed causality = 0;

  bool operator==(const SeedRecord&) const = default;
};

SeedRecord derive_stage_seeds(Seed master, std::uint64_t stream);

struct TTPReport {
  FusionOutcome fusion;
  CausalityOutcome causality;
  DiagnosticsReport diagnostics;
  /// Configuration actually run: stage seeds and the branch method filled in.
  TTPConfig config_echo;
  std::optional<double> bandwidth_pooled;
  std::optional<double> bandwidth_two_arm;
  /// Bandwidth of the matrix the causality test ran on.
  std::optional<double> bandwidth_used;
  SeedRecord seeds;

  bool operator==(const TTPReport&) const = default;
};

/// Causality test for the branch chosen by the fusion stage. Equivalence TTP
/// uses `merged_method` when merged; classic TTP uses the pooled permutation
/// test. Unmerged always runs the standard permutation test.
CausalityOutcome run_branch(const GramCache& gram, const CausalityConfig& base, bool merged,
                            CausalityMethod merged_method);

TTPReport run_equivalence_ttp(const GramCache& gram, const TTPConfig& cfg,
                              std::uint64_t stream = 0);
TTPReport run_equivalence_ttp(const Sample& current, const Sample& historical,
                              const Sample& treatment, const TTPConfig& cfg,
                              std::uint64_t stream = 0);

TTPReport run_classic_ttp(const GramCache& gram, const TTPConfig& cfg, std::uint64_t stream = 0);
TTPReport run_classic_ttp(const Sample& current, const Sample& historical,
                          const Sample& treatment, const TTPConfig& cfg,
                          std::uint64_t stream = 0);

/// Dispatch on cfg.fusion.mode.
TTPReport run_ttp(const GramCache& gram, const TTPConfig& cfg, std::uint64_t stream = 0);

}  // namespace ttp
