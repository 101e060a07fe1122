#include "ttp/causality.hpp"

#include <cmath>
#include <numeric>

#include "detail/linalg.hpp"
#include "detail/resampling.hpp"
#include "ttp/error.hpp"
#include "ttp/stats.hpp"

namespace ttp {

std::string_view to_string(CausalityMethod method) {
  switch (method) {
    case CausalityMethod::StandardPermutation: return "standard_permutation";
    case CausalityMethod::PartialBootstrap: return "partial_bootstrap";
    case CausalityMethod::PartialPermutation: return "partial_permutation";
    case CausalityMethod::NormalApprox: return "normal_approx";
    case CausalityMethod::PooledPermutation: return "pooled_permutation";
  }
  return "unknown";
}

std::optional<CausalityMethod> parse_causality_method(std::string_view text) {
  for (auto m : {CausalityMethod::StandardPermutation, CausalityMethod::PartialBootstrap,
                 CausalityMethod::PartialPermutation, CausalityMethod::NormalApprox,
                 CausalityMethod::PooledPermutation}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

bool is_merged_method(CausalityMethod method) noexcept {
  return method != CausalityMethod::StandardPermutation;
}

void CausalityConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "causality alpha must lie in (0, 1)");
  if (method == CausalityMethod::PartialBootstrap && num_resamples < 1) {
    fail(ErrorKind::InvalidArgument, "partial bootstrap needs at least one resample");
  }
}

namespace {

void expect_method(const CausalityConfig& cfg, CausalityMethod method) {
  if (cfg.method != method) {
    fail(ErrorKind::InvalidArgument, std::string(to_string(method)) + " test called with method " +
                                         std::string(to_string(cfg.method)));
  }
  cfg.validate();
}

void require_sizes(const Partition& p, Estimator estimator, bool uses_historical) {
  if (p.current < 1 || p.treatment < 1 || (uses_historical && p.historical < 1)) {
    fail(ErrorKind::SampleTooSmall, "every arm used by the causality test must be nonempty");
  }
  if (estimator == Estimator::UStat &&
      (p.current < 2 || p.treatment < 2 || (uses_historical && p.historical < 1))) {
    fail(ErrorKind::SampleTooSmall, "the U-statistic needs at least two points per sample");
  }
}

IndexSet current_set(const Partition& p) { return IndexSet::range(p.current_begin(), p.current); }
IndexSet historical_set(const Partition& p) {
  return IndexSet::range(p.historical_begin(), p.historical);
}
IndexSet treatment_set(const Partition& p) {
  return IndexSet::range(p.treatment_begin(), p.treatment);
}

CausalityOutcome permutation_outcome(const detail::PermutationEngine& engine,
                                     const CausalityConfig& cfg, bool merged) {
  Rng rng(cfg.seed);
  std::vector<double> reference = engine.permuted(cfg.num_resamples, rng);
  CausalityOutcome out;
  out.method = cfg.method;
  out.merged_analysis = merged;
  out.statistic = engine.observed();
  reference.push_back(out.statistic);
  out.critical_value = inf_quantile(reference, 1.0 - cfg.alpha);
  out.reject = causality_rejects(out.statistic, out.critical_value);
  out.resamples_used = cfg.num_resamples;
  return out;
}

detail::PermutationEngine partial_permutation_engine(const GramCache& gram, Estimator estimator) {
  const Partition& p = gram.partition();
  const KernelMatrix& k = gram.pooled();
  std::vector<std::size_t> pool;
  pool.reserve(p.current + p.treatment);
  for (std::size_t i = 0; i < p.current; ++i) pool.push_back(p.current_begin() + i);
  for (std::size_t i = 0; i < p.treatment; ++i) pool.push_back(p.treatment_begin() + i);

  detail::Ancillary anc;
  anc.size = p.historical;
  anc.cross_sums.resize(pool.size());
  for (std::size_t q = 0; q < pool.size(); ++q) {
    anc.cross_sums[q] = detail::sum(k.row_ptr(pool[q]) + p.historical_begin(), p.historical);
  }
  std::vector<double> h_rows(p.historical);
  for (std::size_t j = 0; j < p.historical; ++j) {
    const std::size_t r = p.historical_begin() + j;
    h_rows[j] = detail::sum(k.row_ptr(r) + p.historical_begin(), p.historical);
    anc.diag_sum += k(r, r);
  }
  anc.self_sum = detail::pairwise_sum(h_rows);
  return detail::PermutationEngine(k.extract(pool), p.current, estimator, std::move(anc));
}

}  // namespace

CausalityOutcome standard_permutation_test(const GramCache& gram, const CausalityConfig& cfg) {
  expect_method(cfg, CausalityMethod::StandardPermutation);
  const Partition& p = gram.partition();
  require_sizes(p, cfg.estimator, false);
  const detail::PermutationEngine engine(gram.two_arm(), p.current, cfg.estimator);
  return permutation_outcome(engine, cfg, false);
}

CausalityOutcome pooled_permutation_test(const GramCache& gram, const CausalityConfig& cfg) {
  expect_method(cfg, CausalityMethod::PooledPermutation);
  const Partition& p = gram.partition();
  require_sizes(p, cfg.estimator, true);
  // The pooled matrix is already laid out as (current | historical) | treatment.
  const detail::PermutationEngine engine(gram.pooled(), p.current + p.historical, cfg.estimator);
  return permutation_outcome(engine, cfg, true);
}

double partial_bootstrap_statistic(const GramCache& gram, Estimator estimator) {
  const Partition& p = gram.partition();
  require_sizes(p, estimator, true);
  return fused_contrast(gram.pooled(), current_set(p), historical_set(p), treatment_set(p),
                        estimator);
}

std::vector<double> partial_bootstrap_reference(const GramCache& gram,
                                                const CausalityConfig& cfg) {
  require_sizes(gram.partition(), cfg.estimator, true);
  const detail::PartialBootstrapEngine engine(gram.pooled(), gram.partition(), cfg.estimator);
  Rng rng(cfg.seed);
  std::vector<double> draws(cfg.num_resamples);
  for (double& d : draws) d = engine.draw(rng);
  return draws;
}

CausalityOutcome partial_bootstrap_test(const GramCache& gram, const CausalityConfig& cfg) {
  expect_method(cfg, CausalityMethod::PartialBootstrap);
  CausalityOutcome out;
  out.method = cfg.method;
  out.merged_analysis = true;
  out.statistic = partial_bootstrap_statistic(gram, cfg.estimator);
  out.critical_value = inf_quantile(partial_bootstrap_reference(gram, cfg), 1.0 - cfg.alpha);
  out.reject = causality_rejects(out.statistic, out.critical_value);
  out.resamples_used = cfg.num_resamples;
  return out;
}

double partial_permutation_statistic(const GramCache& gram, Estimator estimator) {
  const Partition& p = gram.partition();
  require_sizes(p, estimator, true);
  return mmd2_fused(gram.pooled(), current_set(p), historical_set(p), treatment_set(p), estimator)
      .squared;
}

std::vector<double> partial_permutation_reference(const GramCache& gram,
                                                  const CausalityConfig& cfg) {
  require_sizes(gram.partition(), cfg.estimator, true);
  const auto engine = partial_permutation_engine(gram, cfg.estimator);
  Rng rng(cfg.seed);
  return engine.permuted(cfg.num_resamples, rng);
}

CausalityOutcome partial_permutation_test(const GramCache& gram, const CausalityConfig& cfg) {
  expect_method(cfg, CausalityMethod::PartialPermutation);
  require_sizes(gram.partition(), cfg.estimator, true);
  return permutation_outcome(partial_permutation_engine(gram, cfg.estimator), cfg, true);
}

double normal_approx_sigma2(const GramCache& gram) {
  const Partition& p = gram.partition();
  if (p.current < 2) fail(ErrorKind::SampleTooSmall, "normal approximation needs m >= 2");
  if (p.historical < 1) fail(ErrorKind::SampleTooSmall, "normal approximation needs a historical arm");
  const KernelMatrix& k = gram.pooled();
  const double m = static_cast<double>(p.current);
  const double l = static_cast<double>(p.historical);
  std::vector<double> g(p.current);
  for (std::size_t i = 0; i < p.current; ++i) {
    const double* row = k.row_ptr(p.current_begin() + i);
    const double to_h = detail::sum(row + p.historical_begin(), p.historical);
    const double to_c = detail::sum(row + p.current_begin(), p.current) - row[p.current_begin() + i];
    g[i] = to_h / l - to_c / (m - 1.0);
  }
  const double gamma = m / (m + l);
  return (1.0 - gamma) * (1.0 - gamma) * sample_variance(g);
}

double normal_approx_variance(const GramCache& gram) {
  const Partition& p = gram.partition();
  const double c1 = static_cast<double>(p.current) / static_cast<double>(p.treatment);
  return 4.0 * (1.0 + 1.0 / c1) * normal_approx_sigma2(gram);
}

CausalityOutcome normal_approx_test(const GramCache& gram, const CausalityConfig& cfg) {
  expect_method(cfg, CausalityMethod::NormalApprox);
  CausalityOutcome out;
  out.method = cfg.method;
  out.merged_analysis = true;
  out.statistic = partial_bootstrap_statistic(gram, cfg.estimator);
  out.critical_value = normal_quantile(1.0 - cfg.alpha) * std::sqrt(normal_approx_variance(gram));
  out.reject = causality_rejects(out.statistic, out.critical_value);
  out.resamples_used = 0;
  return out;
}

CausalityOutcome run_causality(const GramCache& gram, const CausalityConfig& cfg) {
  switch (cfg.method) {
    case CausalityMethod::StandardPermutation: return standard_permutation_test(gram, cfg);
    case CausalityMethod::PartialBootstrap: return partial_bootstrap_test(gram, cfg);
    case CausalityMethod::PartialPermutation: return partial_permutation_test(gram, cfg);
    case CausalityMethod::NormalApprox: return normal_approx_test(gram, cfg);
    case CausalityMethod::PooledPermutation: return pooled_permutation_test(gram, cfg);
  }
  fail(ErrorKind::InvalidArgument, "unknown causality method");
}

DiagnosticsReport consistency_diagnostics(const GramCache& gram) {
  const Partition& p = gram.partition();
  if (p.current < 1 || p.historical < 1 || p.treatment < 1) {
    fail(ErrorKind::SampleTooSmall, "diagnostics need every arm nonempty");
  }
  DiagnosticsReport d;
  d.d_hat_ch = mmd2_v(gram, current_set(p), historical_set(p)).root();
  d.d_hat_ct = mmd2_v(gram, current_set(p), treatment_set(p)).root();
  const double m = static_cast<double>(p.current);
  d.gamma = m / (m + static_cast<double>(p.historical));
  d.lambda = static_cast<double>(p.treatment) / (m + static_cast<double>(p.treatment));
  d.sufficient_consistency = 2.0 * (1.0 - d.gamma) * d.d_hat_ch < d.d_hat_ct;
  return d;
}

}  // namespace ttp
