#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ttp/pipeline.hpp"

namespace ttp {

enum class Generator { MeanShift, VarShift };

std::string_view to_string(Generator g);
std::optional<Generator> parse_generator(std::string_view text);

struct Sizes {
  std::size_t n = 100;  // treatment
  std::size_t m = 50;   // current control
  std::size_t l = 100;  // historical control

  bool operator==(const Sizes&) const = default;
};

struct Scenario {
  Generator generator = Generator::MeanShift;
  /// MeanShift: mu_c - mu_t. VarShift: var_c / var_t.
  double control_shift = 0.0;
  /// MeanShift: mu_h - mu_c. VarShift: var_h / var_c.
  double historical_shift = 0.0;
  Sizes sizes;
  TTPConfig ttp;
  std::size_t replicates = 1000;
  Seed master_seed = 0;

  /// Further merged-branch methods evaluated on the same fusion decision.
  std::vector<CausalityMethod> extra_methods;
  /// Also run the standard permutation test with no borrowing.
  bool compare_no_fusion = false;
  /// Also run classic TTP (permutation fusion test, pooled permutation test).
  bool compare_classic = false;

  void validate() const;
  /// Same scenario with the current control shifted onto the treatment law.
  Scenario null_counterpart() const;

  bool operator==(const Scenario&) const = default;
};

struct Arms {
  Sample current;
  Sample historical;
  Sample treatment;
};

/// Data for replicate `index`: depends only on (master_seed, index).
Arms generate_arms(const Scenario& scn, std::uint64_t index);
Seed data_seed(Seed master, std::uint64_t index);

struct MethodRate {
  double reject_rate = 0.0;
  double stderr_reject = 0.0;
  double merge_rate = 0.0;

  bool operator==(const MethodRate&) const = default;
};

struct CampaignResult {
  Scenario scenario_echo;
  std::size_t merges = 0;
  std::size_t rejections = 0;
  double merge_rate = 0.0;
  double reject_rate = 0.0;
  double stderr_merge = 0.0;
  double stderr_reject = 0.0;
  /// Keys: "equivalence_ttp:<method>", "no_fusion", "classic_ttp".
  std::map<std::string, MethodRate> per_method_rates;
  std::string generator_algorithm;
  double wall_time = 0.0;  // seconds; not part of the serialized result

  bool operator==(const CampaignResult& o) const {
    return scenario_echo == o.scenario_echo && merges == o.merges && rejections == o.rejections &&
           merge_rate == o.merge_rate && reject_rate == o.reject_rate &&
           stderr_merge == o.stderr_merge && stderr_reject == o.stderr_reject &&
           per_method_rates == o.per_method_rates && generator_algorithm == o.generator_algorithm;
  }
};

std::string method_key(CausalityMethod merged_method);

/// workers = 0 uses std::thread::hardware_concurrency().
CampaignResult run_campaign(const Scenario& scn, std::size_t workers = 1);

struct NullQuantileRow {
  std::string method;
  double level = 0.0;
  double true_quantile = 0.0;
  double reference_quantile = 0.0;
  /// True-null CDF evaluated at the reference quantile.
  double mapped_level = 0.0;

  bool operator==(const NullQuantileRow&) const = default;
};

struct NullMethodSummary {
  std::string method;
  std::string target;  // "delta" or "T"
  double ks = 0.0;

  bool operator==(const NullMethodSummary&) const = default;
};

struct NullStudyResult {
  Scenario scenario_echo;
  std::vector<double> levels;
  std::vector<NullMethodSummary> methods;
  std::vector<NullQuantileRow> quantiles;

  bool operator==(const NullStudyResult&) const = default;
};

/// Compares the Monte Carlo null law of Delta (and of T) with the reference
/// distributions each method builds from the probe scenario's data.
///
/// The true null comes from null_counterpart() replicates. References are
/// pooled over replicates: bootstrap draws, permutation draws, and for the
/// normal approximation the equal-weight mixture of the fitted normals.
NullStudyResult null_distribution_study(const Scenario& probe, const std::vector<double>& levels,
                                        std::size_t workers = 1);

}  // namespace ttp
