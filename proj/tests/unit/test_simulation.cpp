#include <gtest/gtest.h>

#include <cmath>

#include "ttp/error.hpp"
#include "ttp/serialize.hpp"
#include "ttp/simulation.hpp"

using namespace ttp;

namespace {

Scenario small(std::size_t reps) {
  Scenario s;
  s.sizes = {30, 20, 30};
  s.replicates = reps;
  s.master_seed = 99;
  s.ttp.fusion.num_bootstrap = 100;
  s.ttp.causality.num_resamples = 100;
  return s;
}

}  // namespace

TEST(Generator, MeanShiftMarginals) {
  Scenario s = small(1);
  s.sizes = {4000, 4000, 4000};
  s.control_shift = 0.4;
  s.historical_shift = -0.3;
  const Arms a = generate_arms(s, 0);
  auto moments = [](const Sample& x) {
    double mu = 0.0;
    for (double v : x.flat()) mu += v;
    mu /= x.size();
    double var = 0.0;
    for (double v : x.flat()) var += (v - mu) * (v - mu);
    return std::pair{mu, var / (x.size() - 1)};
  };
  const double band = 4.0 / std::sqrt(4000.0);
  EXPECT_NEAR(moments(a.treatment).first, 0.0, band);
  EXPECT_NEAR(moments(a.current).first, 0.4, band);
  EXPECT_NEAR(moments(a.historical).first, 0.1, band);
  EXPECT_NEAR(moments(a.current).second, 1.0, 4 * std::sqrt(2.0 / 4000));

  s.generator = Generator::VarShift;
  s.control_shift = 2.0;
  s.historical_shift = 1.5;
  const Arms v = generate_arms(s, 0);
  EXPECT_NEAR(moments(v.current).second, 2.0, 4 * 2.0 * std::sqrt(2.0 / 4000));
  EXPECT_NEAR(moments(v.historical).second, 3.0, 4 * 3.0 * std::sqrt(2.0 / 4000));
  EXPECT_NEAR(moments(v.treatment).second, 1.0, 4 * std::sqrt(2.0 / 4000));
  EXPECT_NEAR(moments(v.current).first, 0.0, 4 * std::sqrt(2.0 / 4000));
}

TEST(Generator, ReplicateDataDependsOnSeedAndIndexOnly) {
  Scenario s = small(1);
  const Arms a = generate_arms(s, 7);
  Scenario other = s;
  other.replicates = 500;
  other.ttp.fusion.theta = 0.9;
  const Arms b = generate_arms(other, 7);
  EXPECT_TRUE(std::equal(a.current.flat().begin(), a.current.flat().end(), b.current.flat().begin()));
  const Arms c = generate_arms(s, 8);
  EXPECT_NE(a.current.flat()[0], c.current.flat()[0]);
}

TEST(Campaign, SingleReplicate) {
  const CampaignResult r = run_campaign(small(1));
  EXPECT_TRUE(r.merge_rate == 0.0 || r.merge_rate == 1.0);
  EXPECT_TRUE(r.reject_rate == 0.0 || r.reject_rate == 1.0);
  EXPECT_EQ(r.stderr_merge, 0.0);
  EXPECT_EQ(r.stderr_reject, 0.0);
}

TEST(Campaign, RatesAndStderrs) {
  Scenario s = small(40);
  s.extra_methods = {CausalityMethod::PartialPermutation};
  s.compare_no_fusion = true;
  s.compare_classic = true;
  const CampaignResult r = run_campaign(s);
  EXPECT_EQ(r.merge_rate, r.merges / 40.0);
  EXPECT_EQ(r.reject_rate, r.rejections / 40.0);
  EXPECT_DOUBLE_EQ(r.stderr_reject, std::sqrt(r.reject_rate * (1 - r.reject_rate) / 40));
  ASSERT_EQ(r.per_method_rates.size(), 4u);
  EXPECT_EQ(r.per_method_rates.at(method_key(CausalityMethod::PartialBootstrap)).reject_rate,
            r.reject_rate);
  EXPECT_TRUE(r.per_method_rates.count("no_fusion"));
  EXPECT_TRUE(r.per_method_rates.count("classic_ttp"));
  EXPECT_EQ(r.generator_algorithm, kGeneratorAlgorithm);
}

TEST(Campaign, IdenticalForAnyWorkerCount) {
  Scenario s = small(24);
  s.compare_no_fusion = true;
  const CampaignResult one = run_campaign(s, 1);
  for (std::size_t w : {2u, 3u, 8u}) {
    const CampaignResult many = run_campaign(s, w);
    EXPECT_EQ(one, many);
    EXPECT_EQ(nlohmann::json(one).dump(), nlohmann::json(many).dump());
  }
}

TEST(Scenario, NullCounterpart) {
  Scenario s = small(5);
  s.control_shift = 0.7;
  s.historical_shift = 2.0;
  const Scenario n = s.null_counterpart();
  EXPECT_EQ(n.control_shift, 0.0);
  EXPECT_EQ(n.historical_shift, 2.0);
  EXPECT_NE(n.master_seed, s.master_seed);
  s.generator = Generator::VarShift;
  s.control_shift = 2.0;
  s.historical_shift = 1.5;
  EXPECT_EQ(s.null_counterpart().control_shift, 1.0);
}

TEST(Scenario, Validation) {
  Scenario s = small(1);
  s.sizes.m = 1;
  EXPECT_THROW(s.validate(), Error);
  s = small(0);
  EXPECT_THROW(s.validate(), Error);
  s = small(1);
  s.generator = Generator::VarShift;
  s.control_shift = 0.0;
  EXPECT_THROW(s.validate(), Error);
  s = small(1);
  s.extra_methods = {CausalityMethod::StandardPermutation};
  EXPECT_THROW(s.validate(), Error);
}

TEST(NullStudy, DegenerateTwoReplicateRun) {
  Scenario s = small(2);
  s.historical_shift = 2.0;
  s.control_shift = 1.0;
  const NullStudyResult r = null_distribution_study(s, {0.5, 0.9, 0.95});
  ASSERT_EQ(r.methods.size(), 3u);
  ASSERT_EQ(r.quantiles.size(), 9u);
  for (const auto& m : r.methods) {
    EXPECT_GE(m.ks, 0.0);
    EXPECT_LE(m.ks, 1.0);
  }
  for (const auto& q : r.quantiles) {
    EXPECT_GE(q.mapped_level, 0.0);
    EXPECT_LE(q.mapped_level, 1.0);
  }
  EXPECT_EQ(null_distribution_study(s, {0.5, 0.9, 0.95}, 2), r);
}

TEST(NullStudy, RejectsBadLevels) {
  EXPECT_THROW(null_distribution_study(small(2), {1.0}), Error);
}
