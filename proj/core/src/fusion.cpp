#include "ttp/fusion.hpp"

#include <cmath>
#include <numeric>

#include "detail/resampling.hpp"
#include "ttp/error.hpp"
#include "ttp/stats.hpp"

namespace ttp {

std::string_view to_string(FusionMode mode) {
  return mode == FusionMode::Equivalence ? "equivalence" : "classic";
}

std::optional<FusionMode> parse_fusion_mode(std::string_view text) {
  if (text == "equivalence") return FusionMode::Equivalence;
  if (text == "classic") return FusionMode::ClassicPermutation;
  return std::nullopt;
}

void FusionConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "fusion alpha must lie in (0, 1)");
  if (mode == FusionMode::Equivalence) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
      fail(ErrorKind::InvalidArgument, "equivalence radius theta must be finite and >= 0");
    }
    if (num_bootstrap < 1) fail(ErrorKind::InvalidArgument, "fusion needs at least one bootstrap draw");
  }
}

namespace {

void require_control_arms(const GramCache& gram) {
  const Partition& p = gram.partition();
  if (p.current < 2 || p.historical < 2) {
    fail(ErrorKind::SampleTooSmall, "fusion test needs at least two current and two historical observations");
  }
}

}  // namespace

std::vector<double> equivalence_bootstrap_draws(const GramCache& gram, const FusionConfig& cfg) {
  const Partition& p = gram.partition();
  const detail::SelfBootstrap current(gram.pooled(), p.current_begin(), p.current);
  const detail::SelfBootstrap historical(gram.pooled(), p.historical_begin(), p.historical);
  Rng rng(cfg.seed);
  std::vector<double> draws(cfg.num_bootstrap);
  for (double& s : draws) {
    const double dc = current.draw(rng);
    const double dh = historical.draw(rng);
    s = std::sqrt(std::max(dc, 0.0)) + std::sqrt(std::max(dh, 0.0));
  }
  return draws;
}

FusionOutcome equivalence_fusion(const GramCache& gram, const FusionConfig& cfg) {
  if (cfg.mode != FusionMode::Equivalence) {
    fail(ErrorKind::InvalidArgument, "equivalence_fusion called with a non-equivalence config");
  }
  if (cfg.estimator != Estimator::VStat) {
    fail(ErrorKind::NonVStatEstimator,
         "the equivalence fusion test takes a square root of the MMD estimate and "
         "requires the V-statistic");
  }
  cfg.validate();
  require_control_arms(gram);

  const Partition& p = gram.partition();
  const double distance =
      mmd2_v(gram, IndexSet::range(p.current_begin(), p.current),
             IndexSet::range(p.historical_begin(), p.historical))
          .root();

  FusionOutcome out;
  out.mode = FusionMode::Equivalence;
  out.statistic = cfg.theta - distance;
  out.critical_value = inf_quantile(equivalence_bootstrap_draws(gram, cfg), 1.0 - cfg.alpha);
  out.merged = out.statistic > out.critical_value;
  out.resamples_used = cfg.num_bootstrap;
  return out;
}

FusionOutcome classic_fusion(const GramCache& gram, const FusionConfig& cfg) {
  if (cfg.mode != FusionMode::ClassicPermutation) {
    fail(ErrorKind::InvalidArgument, "classic_fusion called with a non-classic config");
  }
  cfg.validate();
  require_control_arms(gram);

  const Partition& p = gram.partition();
  std::vector<std::size_t> pool(p.current + p.historical);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  const detail::PermutationEngine engine(gram.pooled().extract(pool), p.current, Estimator::VStat);

  Rng rng(cfg.seed);
  std::vector<double> reference = engine.permuted(cfg.num_bootstrap, rng);
  FusionOutcome out;
  out.mode = FusionMode::ClassicPermutation;
  out.statistic = engine.observed();
  reference.push_back(out.statistic);
  out.critical_value = inf_quantile(reference, 1.0 - cfg.alpha);
  out.merged = out.statistic <= out.critical_value;
  out.resamples_used = cfg.num_bootstrap;
  return out;
}

FusionOutcome run_fusion(const GramCache& gram, const FusionConfig& cfg) {
  return cfg.mode == FusionMode::Equivalence ? equivalence_fusion(gram, cfg)
                                             : classic_fusion(gram, cfg);
}

}  // namespace ttp
