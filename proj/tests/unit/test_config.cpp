#include <gtest/gtest.h>

#include "ttp/config.hpp"
#include "ttp/error.hpp"

using namespace ttp;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Config, ParsesScalarsCommentsAndLists) {
  const Config c = Config::parse(
      "# a comment\n"
      "seed = 17\n"
      "fusion.theta = [0.2, 0.4]   # sweep\n"
      "\n"
      "kernel.bandwidth = 1.5\n"
      "scenario.extra_methods = [partial_permutation]\n");
  EXPECT_EQ(c.get_u64("seed"), 17u);
  EXPECT_TRUE(c.is_grid());
  EXPECT_EQ(c.get_list("fusion.theta").size(), 2u);
  EXPECT_EQ(c.get_double("kernel.bandwidth"), 1.5);
  EXPECT_EQ(c.get_list("scenario.extra_methods"), std::vector<std::string>{"partial_permutation"});
  EXPECT_EQ(c.get_string("causality.merged_method"), "partial_bootstrap");  // default
}

TEST(Config, UnknownKeysAndBadValuesAreConfigErrors) {
  EXPECT_EQ(kind_of([] { Config::parse("fusion.thetta = 0.4\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::parse("fusion.theta = abc\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::parse("kernel.family = gaussian\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::parse("kernel.bandwidth = -1\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::parse("seed = [1, 2]\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::parse("seed = 1\nseed = 2\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::parse("just words\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::parse("fusion.theta = nan\n"); }), ErrorKind::ConfigError);
  Config c;
  EXPECT_EQ(kind_of([&] { c.set("nope=1"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([&] { c.set("no equals sign"); }), ErrorKind::ConfigError);
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    Config::parse("seed = 1\n\nfusion.alpha = x\n", "demo.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("demo.cfg:3"), std::string::npos) << e.what();
  }
}

TEST(Config, OverridesReplaceFileValues) {
  Config c = Config::parse("fusion.theta = 0.4\n");
  c.set("fusion.theta=0.8");
  EXPECT_EQ(c.get_double("fusion.theta"), 0.8);
  c.set("fusion.theta = [0.1, 0.2, 0.3]");
  EXPECT_EQ(c.expand().size(), 3u);
}

TEST(Config, ExpandIsCartesianInSchemaOrder) {
  const Config c = Config::parse(
      "kernel.bandwidth = [median, 0.5]\n"
      "scenario.control_shift = [-0.4, 0, 0.4]\n");
  const auto cells = c.expand();
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0].get_string("kernel.bandwidth"), "median");
  EXPECT_EQ(cells[0].get_double("scenario.control_shift"), -0.4);
  EXPECT_EQ(cells[1].get_double("scenario.control_shift"), 0.0);
  EXPECT_EQ(cells[3].get_string("kernel.bandwidth"), "0.5");
  for (const auto& cell : cells) EXPECT_FALSE(cell.is_grid());
}

TEST(Config, EffectiveEchoesEveryKey) {
  const Config c = Config::parse("fusion.theta = 0.7\n");
  const auto e = c.effective();
  EXPECT_EQ(e.size(), Config::documented_keys().size());
  EXPECT_EQ(e.at("fusion.theta").get<double>(), 0.7);
  EXPECT_EQ(e.at("fusion.alpha").get<double>(), 0.05);
  EXPECT_EQ(e.at("kernel.bandwidth").get<std::string>(), "median");
  EXPECT_TRUE(e.at("null_study.levels").is_array());
}

TEST(Config, BuildsTypedConfigs) {
  const Config c = Config::parse(
      "seed = 5\n"
      "kernel.family = linear\n"
      "fusion.theta = 1\n"
      "causality.estimator = ustat\n"
      "causality.merged_method = normal_approx\n"
      "scenario.generator = var_shift\n"
      "scenario.control_shift = 1\n"
      "scenario.historical_shift = 1.5\n"
      "scenario.n = 60\n"
      "scenario.replicates = 3\n"
      "scenario.compare_no_fusion = true\n");
  const Scenario s = scenario_from(c);
  EXPECT_EQ(s.generator, Generator::VarShift);
  EXPECT_EQ(s.sizes.n, 60u);
  EXPECT_EQ(s.sizes.m, 50u);
  EXPECT_EQ(s.replicates, 3u);
  EXPECT_EQ(s.master_seed, 5u);
  EXPECT_TRUE(s.compare_no_fusion);
  EXPECT_EQ(s.ttp.kernel.family, KernelFamily::Linear);
  EXPECT_EQ(s.ttp.fusion.theta, 1.0);
  EXPECT_EQ(s.ttp.causality.estimator, Estimator::UStat);
  EXPECT_EQ(s.ttp.merged_method, CausalityMethod::NormalApprox);
}

TEST(Config, RangeErrorsBecomeConfigErrors) {
  EXPECT_EQ(kind_of([] { ttp_config_from(Config::parse("fusion.alpha = 1.5\n")); }),
            ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { scenario_from(Config::parse("scenario.m = 1\n")); }),
            ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { null_levels_from(Config::parse("null_study.levels = [1.2]\n")); }),
            ErrorKind::ConfigError);
}
