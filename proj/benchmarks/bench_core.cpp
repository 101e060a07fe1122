#include <benchmark/benchmark.h>

#include <vector>

#include "ttp/causality.hpp"
#include "ttp/fusion.hpp"
#include "ttp/simulation.hpp"

using namespace ttp;

namespace {

// Arms at m = l = n/2, mean-shift DGP like the synthetic studies.
Arms arms_for(std::size_t n) {
  Scenario s;
  s.control_shift = 0.4;
  s.historical_shift = 0.2;
  s.sizes = {n, n / 2, n / 2};
  s.master_seed = 12;
  return generate_arms(s, 0);
}

GramCache gram_for(std::size_t n) {
  const Arms a = arms_for(n);
  return build_gram(KernelSpec::rbf_median(), a.current, a.historical, a.treatment);
}

void BM_BuildGram(benchmark::State& state) {
  const Arms a = arms_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_gram(KernelSpec::rbf_median(), a.current, a.historical, a.treatment));
  }
}
BENCHMARK(BM_BuildGram)->Arg(100)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_EquivalenceFusion(benchmark::State& state) {
  const GramCache g = gram_for(static_cast<std::size_t>(state.range(0)));
  FusionConfig cfg;
  cfg.num_bootstrap = 500;
  for (auto _ : state) benchmark::DoNotOptimize(equivalence_fusion(g, cfg));
}
BENCHMARK(BM_EquivalenceFusion)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Causality(benchmark::State& state, CausalityMethod method) {
  const GramCache g = gram_for(static_cast<std::size_t>(state.range(0)));
  CausalityConfig cfg;
  cfg.num_resamples = 500;
  cfg.method = method;
  for (auto _ : state) benchmark::DoNotOptimize(run_causality(g, cfg));
}
BENCHMARK_CAPTURE(BM_Causality, standard_permutation, CausalityMethod::StandardPermutation)
    ->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Causality, partial_bootstrap, CausalityMethod::PartialBootstrap)
    ->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Causality, partial_permutation, CausalityMethod::PartialPermutation)
    ->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Causality, normal_approx, CausalityMethod::NormalApprox)
    ->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Campaign(benchmark::State& state) {
  Scenario s;
  s.control_shift = 0.4;
  s.historical_shift = 0.2;
  s.replicates = 20;
  s.ttp.fusion.num_bootstrap = 200;
  s.ttp.causality.num_resamples = 200;
  for (auto _ : state) benchmark::DoNotOptimize(run_campaign(s, 1));
}
BENCHMARK(BM_Campaign)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
