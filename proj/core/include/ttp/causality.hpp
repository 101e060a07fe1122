#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "ttp/kernels.hpp"
#include "ttp/mmd.hpp"
#include "ttp/rng.hpp"

namespace ttp {

enum class CausalityMethod {
  StandardPermutation,  // current vs treatment, historical unused
  PartialBootstrap,
  PartialPermutation,
  NormalApprox,
  PooledPermutation,  // classic TTP merged branch: (current | historical) vs treatment
};

std::string_view to_string(CausalityMethod method);
std::optional<CausalityMethod> parse_causality_method(std::string_view text);

/// Methods that use the historical arm as part of a fused control.
bool is_merged_method(CausalityMethod method) noexcept;

struct CausalityConfig {
  double alpha = 0.05;
  std::size_t num_resamples = 1000;
  CausalityMethod method = CausalityMethod::PartialBootstrap;
  Estimator estimator = Estimator::VStat;
  Seed seed = 0;

  void validate() const;
  bool operator==(const CausalityConfig&) const = default;
};

struct CausalityOutcome {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool reject = false;
  CausalityMethod method = CausalityMethod::StandardPermutation;
  bool merged_analysis = false;
  std::size_t resamples_used = 0;

  bool operator==(const CausalityOutcome&) const = default;
};

struct DiagnosticsReport {
  double d_hat_ch = 0.0;
  double d_hat_ct = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  bool sufficient_consistency = false;

  bool operator==(const DiagnosticsReport&) const = default;
};

/// Shared decision rule of every causality test.
inline bool causality_rejects(double statistic, double critical_value) noexcept {
  return statistic > critical_value;
}

CausalityOutcome standard_permutation_test(const GramCache& gram, const CausalityConfig& cfg);
CausalityOutcome partial_bootstrap_test(const GramCache& gram, const CausalityConfig& cfg);
CausalityOutcome partial_permutation_test(const GramCache& gram, const CausalityConfig& cfg);
CausalityOutcome normal_approx_test(const GramCache& gram, const CausalityConfig& cfg);
CausalityOutcome pooled_permutation_test(const GramCache& gram, const CausalityConfig& cfg);

/// Dispatch on cfg.method.
CausalityOutcome run_causality(const GramCache& gram, const CausalityConfig& cfg);

DiagnosticsReport consistency_diagnostics(const GramCache& gram);

// Pieces exposed for the null-distribution study and for tests.

/// Delta = sqrt(n) (D^2(fused, treatment) - D^2(fused, current)).
double partial_bootstrap_statistic(const GramCache& gram, Estimator estimator);
/// B bootstrap draws Delta*_b in draw order.
std::vector<double> partial_bootstrap_reference(const GramCache& gram, const CausalityConfig& cfg);

/// T = D^2(current | historical, treatment).
double partial_permutation_statistic(const GramCache& gram, Estimator estimator);
/// B permuted statistics T^b (the observed T^0 is not included).
std::vector<double> partial_permutation_reference(const GramCache& gram,
                                                  const CausalityConfig& cfg);

/// sigma_c^2 estimate from the current-control kernel rows.
double normal_approx_sigma2(const GramCache& gram);
/// Variance of the limiting normal, 4 (1 + n/m) sigma_c^2.
double normal_approx_variance(const GramCache& gram);

}  // namespace ttp
