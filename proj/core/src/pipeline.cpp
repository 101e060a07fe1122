#include "ttp/pipeline.hpp"

#include "ttp/error.hpp"

namespace ttp {

void TTPConfig::validate() const {
  kernel.validate();
  fusion.validate();
  causality.validate();
  if (merged_method == CausalityMethod::StandardPermutation) {
    fail(ErrorKind::InvalidArgument, "merged_method must be a fused-control method");
  }
}

SeedRecord derive_stage_seeds(Seed master, std::uint64_t stream) {
  return {master, stream, derive_seed(master, "fusion", stream),
          derive_seed(master, "causality", stream)};
}

CausalityOutcome run_branch(const GramCache& gram, const CausalityConfig& base, bool merged,
                            CausalityMethod merged_method) {
  CausalityConfig cfg = base;
  cfg.method = merged ? merged_method : CausalityMethod::StandardPermutation;
  CausalityOutcome out = run_causality(gram, cfg);
  out.merged_analysis = merged;
  return out;
}

namespace {

TTPReport run_pipeline(const GramCache& gram, const TTPConfig& cfg, std::uint64_t stream,
                       FusionMode mode, CausalityMethod merged_method) {
  if (cfg.fusion.mode != mode) {
    fail(ErrorKind::InvalidArgument, "fusion mode does not match the requested TTP variant");
  }
  if (!(gram.kernel() == cfg.kernel)) {
    fail(ErrorKind::InvalidArgument, "Gram cache was built with a different kernel spec");
  }
  TTPReport report;
  report.seeds = derive_stage_seeds(cfg.master_seed, stream);
  report.config_echo = cfg;
  report.config_echo.fusion.seed = report.seeds.fusion;
  report.config_echo.causality.seed = report.seeds.causality;

  report.fusion = run_fusion(gram, report.config_echo.fusion);
  report.causality =
      run_branch(gram, report.config_echo.causality, report.fusion.merged, merged_method);
  report.config_echo.causality.method = report.causality.method;
  report.diagnostics = consistency_diagnostics(gram);

  report.bandwidth_pooled = gram.pooled_bandwidth();
  report.bandwidth_two_arm = gram.two_arm_bandwidth();
  report.bandwidth_used = report.fusion.merged ? gram.pooled_bandwidth() : gram.two_arm_bandwidth();
  return report;
}

}  // namespace

TTPReport run_equivalence_ttp(const GramCache& gram, const TTPConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  return run_pipeline(gram, cfg, stream, FusionMode::Equivalence, cfg.merged_method);
}

TTPReport run_equivalence_ttp(const Sample& current, const Sample& historical,
                              const Sample& treatment, const TTPConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  return run_equivalence_ttp(build_gram(cfg.kernel, current, historical, treatment), cfg, stream);
}

TTPReport run_classic_ttp(const GramCache& gram, const TTPConfig& cfg, std::uint64_t stream) {
  cfg.kernel.validate();
  cfg.fusion.validate();
  cfg.causality.validate();
  return run_pipeline(gram, cfg, stream, FusionMode::ClassicPermutation,
                      CausalityMethod::PooledPermutation);
}

TTPReport run_classic_ttp(const Sample& current, const Sample& historical,
                          const Sample& treatment, const TTPConfig& cfg, std::uint64_t stream) {
  return run_classic_ttp(build_gram(cfg.kernel, current, historical, treatment), cfg, stream);
}

TTPReport run_ttp(const GramCache& gram, const TTPConfig& cfg, std::uint64_t stream) {
  return cfg.fusion.mode == FusionMode::Equivalence ? run_equivalence_ttp(gram, cfg, stream)
                                                    : run_classic_ttp(gram, cfg, stream);
}

}  // namespace ttp
