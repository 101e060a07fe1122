#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ttp/error.hpp"
#include "ttp/rng.hpp"

using namespace ttp;

TEST(Error, CarriesKind) {
  try {
    fail(ErrorKind::DegenerateSample, "all equal");
    FAIL() << "fail() returned";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateSample);
    EXPECT_NE(std::string(e.what()).find("all equal"), std::string::npos);
    EXPECT_EQ(e.message(), "all equal");
  }
  EXPECT_EQ(to_string(ErrorKind::SampleTooSmall), "SampleTooSmall");
}

TEST(Seeds, DeriveIsDeterministicAndSeparatesLabels) {
  EXPECT_EQ(derive_seed(7, "fusion", 3), derive_seed(7, "fusion", 3));
  EXPECT_NE(derive_seed(7, "fusion", 3), derive_seed(7, "causality", 3));
  EXPECT_NE(derive_seed(7, "fusion", 3), derive_seed(7, "fusion", 4));
  EXPECT_NE(derive_seed(7, "fusion", 3), derive_seed(8, "fusion", 3));
  std::set<Seed> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(1, "data", i));
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, UniformIndexCoversRangeEvenly) {
  Rng r(3);
  const std::size_t bound = 7;
  std::vector<int> counts(bound, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const std::size_t k = r.uniform_index(bound);
    ASSERT_LT(k, bound);
    ++counts[k];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(draws) / bound;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 22.46);  // chi-square(6) upper 0.001 point
  EXPECT_EQ(r.uniform_index(1), 0u);
}

TEST(Rng, NormalMoments) {
  Rng r(5);
  std::vector<double> x(200000);
  r.fill_normal(x, 1.5, 2.0);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= x.size() - 1;
  EXPECT_NEAR(mean, 1.5, 4 * 2.0 / std::sqrt(x.size()));
  EXPECT_NEAR(var, 4.0, 0.05);
}
