#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "detail/resampling.hpp"
#include "oracles.hpp"
#include "ttp/causality.hpp"
#include "ttp/error.hpp"
#include "ttp/stats.hpp"

using namespace ttp;

namespace {

struct Arms {
  oracle::Points c, h, t;
};

Arms gaussian_arms(std::mt19937_64& gen, std::size_t m, std::size_t l, std::size_t n,
                   double mu_h, double mu_t) {
  return {oracle::gaussian_points(gen, m, 1), oracle::gaussian_points(gen, l, 1, mu_h),
          oracle::gaussian_points(gen, n, 1, mu_t)};
}

GramCache gram_of(const Arms& a, const KernelSpec& spec = KernelSpec::rbf_median()) {
  return build_gram(spec, oracle::to_sample(Arm::Current, a.c),
                    oracle::to_sample(Arm::Historical, a.h),
                    oracle::to_sample(Arm::Treatment, a.t));
}

CausalityConfig config(CausalityMethod method, std::size_t B, Seed seed,
                       Estimator est = Estimator::VStat) {
  CausalityConfig c;
  c.method = method;
  c.num_resamples = B;
  c.seed = seed;
  c.estimator = est;
  return c;
}

double rejection_rate(CausalityMethod method, int sims, std::size_t m, std::size_t l,
                      std::size_t n, double mu_h, double mu_t, std::size_t B, std::uint64_t seed,
                      Estimator est = Estimator::VStat) {
  std::mt19937_64 gen(seed);
  int rejects = 0;
  for (int s = 0; s < sims; ++s) {
    const GramCache g = gram_of(gaussian_arms(gen, m, l, n, mu_h, mu_t));
    rejects += run_causality(g, config(method, B, s, est)).reject;
  }
  return rejects / static_cast<double>(sims);
}

}  // namespace

TEST(StandardPermutation, IdenticalArmsDoNotReject) {
  const auto c = Sample::univariate(Arm::Current, {0.0, 1.0, 3.0});
  const auto h = Sample::univariate(Arm::Historical, {5.0, 6.0});
  const auto t = Sample::univariate(Arm::Treatment, {3.0, 0.0, 1.0});
  const GramCache g = build_gram(KernelSpec::rbf_median(), c, h, t);
  const CausalityOutcome out =
      standard_permutation_test(g, config(CausalityMethod::StandardPermutation, 200, 1));
  EXPECT_NEAR(out.statistic, 0.0, 1e-15);
  EXPECT_FALSE(out.reject);
  EXPECT_FALSE(out.merged_analysis);
}

TEST(StandardPermutation, UsesTheTwoArmBandwidth) {
  std::mt19937_64 gen(1);
  const Arms a = gaussian_arms(gen, 20, 30, 25, 3.0, 0.5);
  const GramCache g = gram_of(a);
  ASSERT_NE(*g.pooled_bandwidth(), *g.two_arm_bandwidth());
  const CausalityOutcome out =
      standard_permutation_test(g, config(CausalityMethod::StandardPermutation, 10, 1));
  const double bw = oracle::median_sq_distance(oracle::concat(a.c, a.t));
  EXPECT_NEAR(out.statistic, oracle::mmd2_v(KernelSpec::rbf(bw), bw, a.c, a.t), 1e-12);
}

TEST(StandardPermutation, ReferenceIncludesObserved) {
  std::mt19937_64 gen(2);
  const GramCache g = gram_of(gaussian_arms(gen, 10, 10, 10, 0.0, 3.0));
  // with B = 0 the observed statistic is the whole reference set
  const CausalityOutcome out =
      standard_permutation_test(g, config(CausalityMethod::StandardPermutation, 0, 1));
  EXPECT_EQ(out.critical_value, out.statistic);
  EXPECT_FALSE(out.reject);
}

TEST(PermutationEngine, MatchesDirectRecomputation) {
  std::mt19937_64 gen(3);
  const Arms a = gaussian_arms(gen, 7, 6, 9, 0.4, -0.2);
  const KernelSpec spec = KernelSpec::rbf(1.0);
  const GramCache g = gram_of(a, spec);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < 7; ++i) pool.push_back(i);
  for (std::size_t i = 13; i < 22; ++i) pool.push_back(i);
  const KernelMatrix block = g.pooled().extract(pool);
  const oracle::Points ct = oracle::concat(a.c, a.t);

  for (Estimator est : {Estimator::VStat, Estimator::UStat}) {
    // plain two-sample engine
    const detail::PermutationEngine plain(block, 7, est);
    // with the historical arm joined to group A
    detail::Ancillary anc;
    anc.size = 6;
    for (std::size_t q = 0; q < pool.size(); ++q) {
      double s = 0.0;
      for (std::size_t j = 7; j < 13; ++j) s += g(pool[q], j);
      anc.cross_sums.push_back(s);
    }
    for (std::size_t i = 7; i < 13; ++i) {
      anc.diag_sum += g(i, i);
      for (std::size_t j = 7; j < 13; ++j) anc.self_sum += g(i, j);
    }
    const detail::PermutationEngine partial(block, 7, est, anc);

    std::mt19937_64 pick(4);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<std::size_t> order(16);
      for (std::size_t i = 0; i < 16; ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), pick);
      const std::vector<std::size_t> members(order.begin(), order.begin() + 7);
      oracle::Points pa, pb;
      std::vector<char> in(16, 0);
      for (std::size_t i : members) in[i] = 1;
      for (std::size_t i = 0; i < 16; ++i) (in[i] ? pa : pb).push_back(ct[i]);
      const auto fused = oracle::concat(pa, a.h);
      if (est == Estimator::VStat) {
        EXPECT_NEAR(plain.statistic(members), oracle::mmd2_v(spec, 1.0, pa, pb), 1e-12);
        EXPECT_NEAR(partial.statistic(members), oracle::mmd2_v(spec, 1.0, fused, pb), 1e-12);
      } else {
        EXPECT_NEAR(plain.statistic(members), oracle::mmd2_u(spec, 1.0, pa, pb), 1e-12);
        EXPECT_NEAR(partial.statistic(members), oracle::mmd2_u(spec, 1.0, fused, pb), 1e-12);
      }
    }
  }
}

TEST(PartialBootstrap, StatisticMatchesOracle) {
  std::mt19937_64 gen(5);
  const Arms a = gaussian_arms(gen, 12, 15, 14, 0.5, 0.3);
  const GramCache g = gram_of(a);
  const double bw = *g.pooled_bandwidth();
  EXPECT_NEAR(partial_bootstrap_statistic(g, Estimator::VStat),
              oracle::fused_contrast_v(KernelSpec::rbf(bw), bw, a.c, a.h, a.t), 1e-12);
}

TEST(PartialBootstrap, DrawsMatchExplicitResamples) {
  std::mt19937_64 gen(6);
  const Arms a = gaussian_arms(gen, 8, 6, 10, 0.5, 0.0);
  const KernelSpec spec = KernelSpec::rbf(0.8);
  const GramCache g = gram_of(a, spec);
  const detail::PartialBootstrapEngine engine(g.pooled(), g.partition(), Estimator::VStat);
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::size_t> c, t, h;
    detail::draw_with_replacement(rng, 0, 8, 8, c);
    detail::draw_with_replacement(rng, 0, 8, 10, t);  // treatment draws come from current
    detail::draw_with_replacement(rng, 8, 6, 6, h);
    oracle::Points pc, pt, ph;
    for (auto i : c) pc.push_back(a.c[i]);
    for (auto i : t) pt.push_back(a.c[i]);
    for (auto i : h) ph.push_back(a.h[i - 8]);
    EXPECT_NEAR(engine.contrast(c, t, h), oracle::fused_contrast_v(spec, 0.8, pc, ph, pt), 1e-12);
  }
}

TEST(PartialBootstrap, ZeroStatisticWhenTreatmentCopiesCurrent) {
  const std::vector<double> v = {0.1, 0.7, 1.9, -0.4};
  const GramCache g = build_gram(KernelSpec::rbf_median(), Sample::univariate(Arm::Current, v),
                                 Sample::univariate(Arm::Historical, v),
                                 Sample::univariate(Arm::Treatment, v));
  const CausalityOutcome out =
      partial_bootstrap_test(g, config(CausalityMethod::PartialBootstrap, 300, 2));
  EXPECT_NEAR(out.statistic, 0.0, 1e-12);
  if (out.critical_value >= 0.0) {
    EXPECT_FALSE(out.reject);
  }
}

TEST(PartialBootstrap, CriticalValueIsQuantileOfDraws) {
  std::mt19937_64 gen(7);
  const GramCache g = gram_of(gaussian_arms(gen, 20, 30, 25, 0.2, 0.0));
  const CausalityConfig cfg = config(CausalityMethod::PartialBootstrap, 400, 5);
  const auto draws = partial_bootstrap_reference(g, cfg);
  const CausalityOutcome out = partial_bootstrap_test(g, cfg);
  EXPECT_EQ(out.critical_value, inf_quantile(draws, 0.95));
  EXPECT_EQ(out.reject, out.statistic > out.critical_value);
  EXPECT_TRUE(out.merged_analysis);
  EXPECT_EQ(partial_bootstrap_test(g, cfg), out);  // deterministic per seed
}

TEST(PartialPermutation, StatisticAndReference) {
  std::mt19937_64 gen(8);
  const Arms a = gaussian_arms(gen, 10, 12, 11, 2.0, 0.0);
  const GramCache g = gram_of(a);
  const double bw = *g.pooled_bandwidth();
  const CausalityConfig cfg = config(CausalityMethod::PartialPermutation, 300, 4);
  const CausalityOutcome out = partial_permutation_test(g, cfg);
  EXPECT_NEAR(out.statistic,
              oracle::mmd2_v(KernelSpec::rbf(bw), bw, oracle::concat(a.c, a.h), a.t), 1e-12);
  auto ref = partial_permutation_reference(g, cfg);
  ref.push_back(out.statistic);
  EXPECT_EQ(out.critical_value, inf_quantile(ref, 0.95));
}

TEST(PartialPermutation, AllObservationsIdentical) {
  const std::vector<double> v(4, 1.0);
  const GramCache g = build_gram(KernelSpec::rbf(1.0), Sample::univariate(Arm::Current, v),
                                 Sample::univariate(Arm::Historical, v),
                                 Sample::univariate(Arm::Treatment, v));
  const CausalityOutcome out =
      partial_permutation_test(g, config(CausalityMethod::PartialPermutation, 50, 1));
  EXPECT_NEAR(out.statistic, 0.0, 1e-15);
  EXPECT_FALSE(out.reject);
}

TEST(NormalApprox, VarianceMatchesRawPointOracle) {
  std::mt19937_64 gen(9);
  for (int rep = 0; rep < 10; ++rep) {
    const Arms a = gaussian_arms(gen, 15 + rep, 20, 12, 0.5, 0.0);
    const GramCache g = gram_of(a);
    const double bw = *g.pooled_bandwidth();
    const double want = oracle::normal_sigma2(KernelSpec::rbf(bw), bw, a.c, a.h);
    EXPECT_NEAR(normal_approx_sigma2(g), want, 1e-12);
    const double c1 = (15.0 + rep) / 12.0;
    EXPECT_NEAR(normal_approx_variance(g), 4.0 * (1.0 + 1.0 / c1) * want, 1e-12);
  }
}

TEST(NormalApprox, ConstantRowsGiveZeroCritical) {
  const std::vector<double> v(5, 2.0);
  const GramCache g = build_gram(KernelSpec::rbf(1.0), Sample::univariate(Arm::Current, v),
                                 Sample::univariate(Arm::Historical, v),
                                 Sample::univariate(Arm::Treatment, v));
  const CausalityOutcome out = normal_approx_test(g, config(CausalityMethod::NormalApprox, 0, 0));
  EXPECT_EQ(normal_approx_sigma2(g), 0.0);
  EXPECT_EQ(out.critical_value, 0.0);
  EXPECT_FALSE(out.reject);
}

TEST(NormalApprox, CriticalValueFormula) {
  std::mt19937_64 gen(10);
  const GramCache g = gram_of(gaussian_arms(gen, 30, 30, 40, 0.0, 0.0));
  const CausalityOutcome out = normal_approx_test(g, config(CausalityMethod::NormalApprox, 0, 0));
  EXPECT_NEAR(out.critical_value, normal_quantile(0.95) * std::sqrt(normal_approx_variance(g)), 1e-15);
  EXPECT_EQ(out.statistic, partial_bootstrap_statistic(g, Estimator::VStat));
}

TEST(Causality, SharedDecisionRule) {
  for (double s : {-1.0, 0.0, 0.5, 1.0}) {
    for (double q : {-1.0, 0.0, 0.5, 1.0}) EXPECT_EQ(causality_rejects(s, q), s > q);
  }
}

TEST(Causality, MethodMismatchIsAnError) {
  std::mt19937_64 gen(11);
  const GramCache g = gram_of(gaussian_arms(gen, 5, 5, 5, 0.0, 0.0));
  EXPECT_THROW(partial_bootstrap_test(g, config(CausalityMethod::NormalApprox, 10, 1)), Error);
  EXPECT_THROW(standard_permutation_test(g, config(CausalityMethod::PartialBootstrap, 10, 1)), Error);
}

TEST(Causality, UStatNeedsTwoPoints) {
  const GramCache g = build_gram(KernelSpec::rbf(1.0), Sample::univariate(Arm::Current, {0.0}),
                                 Sample::univariate(Arm::Historical, {1.0, 2.0}),
                                 Sample::univariate(Arm::Treatment, {0.5, 0.2}));
  try {
    run_causality(g, config(CausalityMethod::PartialPermutation, 10, 1, Estimator::UStat));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SampleTooSmall);
  }
}

TEST(Diagnostics, Examples) {
  const std::vector<double> c = {0.0, 1.0, 2.0, 3.0};
  const std::vector<double> t = {0.0, 5.0, 1.0, 7.0};
  const GramCache g = build_gram(KernelSpec::rbf_median(), Sample::univariate(Arm::Current, c),
                                 Sample::univariate(Arm::Historical, c),
                                 Sample::univariate(Arm::Treatment, t));
  const DiagnosticsReport d = consistency_diagnostics(g);
  EXPECT_NEAR(d.d_hat_ch, 0.0, 1e-7);
  EXPECT_GT(d.d_hat_ct, 0.0);
  EXPECT_TRUE(d.sufficient_consistency);
  EXPECT_EQ(d.gamma, 0.5);

  std::mt19937_64 gen(12);
  const GramCache g2 = gram_of(gaussian_arms(gen, 50, 100, 100, 0.0, 0.0));
  const DiagnosticsReport d2 = consistency_diagnostics(g2);
  EXPECT_DOUBLE_EQ(d2.gamma, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(d2.lambda, 2.0 / 3.0);
  EXPECT_EQ(d2.sufficient_consistency, 2.0 * (1.0 - d2.gamma) * d2.d_hat_ch < d2.d_hat_ct);
}

// Monte Carlo validity and power at reduced scale (see the acceptance suite
// for the full 1000-replicate runs).
TEST(StandardPermutation, SizeUnderTheNull) {
  const int sims = 300;
  const double rate = rejection_rate(CausalityMethod::StandardPermutation, sims, 50, 20, 100, 0.0, 0.0, 200, 13);
  EXPECT_LE(rate, 0.05 + 3 * binomial_stderr(0.05, sims));
}

TEST(StandardPermutation, PowerAgainstMeanShift) {
  const double rate = rejection_rate(CausalityMethod::StandardPermutation, 200, 50, 20, 100, 0.0, 0.8, 200, 14);
  EXPECT_GE(rate, 0.5);
}

TEST(PartialPermutation, SizeWithBiasedHistorical) {
  const int sims = 300;
  for (Estimator est : {Estimator::VStat, Estimator::UStat}) {
    const double rate = rejection_rate(CausalityMethod::PartialPermutation, sims, 50, 100, 100,
                                       2.0, 0.0, 200, 15, est);
    EXPECT_LE(rate, 0.05 + 3 * binomial_stderr(0.05, sims));
  }
}

TEST(PartialBootstrap, SizeWithBiasedHistorical) {
  const int sims = 300;
  for (Estimator est : {Estimator::VStat, Estimator::UStat}) {
    const double rate = rejection_rate(CausalityMethod::PartialBootstrap, sims, 50, 100, 100, 2.0,
                                       0.0, 200, 16, est);
    EXPECT_LE(rate, 0.05 + 3 * binomial_stderr(0.05, sims));
  }
}

TEST(NormalApprox, SizeWithBiasedHistorical) {
  const int sims = 200;
  const double rate =
      rejection_rate(CausalityMethod::NormalApprox, sims, 150, 150, 300, 2.0, 0.0, 0, 17);
  EXPECT_LE(rate, 0.05 + 3 * binomial_stderr(0.05, sims));
}
