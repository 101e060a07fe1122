#include "ttp/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "ttp/error.hpp"
#include "ttp/stats.hpp"

namespace ttp {

std::string_view to_string(Generator g) {
  return g == Generator::MeanShift ? "mean_shift" : "var_shift";
}

std::optional<Generator> parse_generator(std::string_view text) {
  if (text == "mean_shift") return Generator::MeanShift;
  if (text == "var_shift") return Generator::VarShift;
  return std::nullopt;
}

void Scenario::validate() const {
  if (sizes.n < 2 || sizes.m < 2 || sizes.l < 2) {
    fail(ErrorKind::InvalidArgument, "scenario sizes n, m, l must each be at least 2");
  }
  if (replicates < 1) fail(ErrorKind::InvalidArgument, "scenario needs at least one replicate");
  if (generator == Generator::VarShift && !(control_shift > 0.0 && historical_shift > 0.0)) {
    fail(ErrorKind::InvalidArgument, "variance ratios must be positive");
  }
  if (!std::isfinite(control_shift) || !std::isfinite(historical_shift)) {
    fail(ErrorKind::InvalidArgument, "scenario shifts must be finite");
  }
  ttp.kernel.validate();
  ttp.fusion.validate();
  ttp.causality.validate();
  if (ttp.fusion.mode == FusionMode::Equivalence) ttp.validate();
  for (CausalityMethod m : extra_methods) {
    if (!is_merged_method(m)) fail(ErrorKind::InvalidArgument, "extra methods must be merged-branch methods");
  }
}

Scenario Scenario::null_counterpart() const {
  Scenario out = *this;
  out.control_shift = generator == Generator::MeanShift ? 0.0 : 1.0;
  out.master_seed = derive_seed(master_seed, "null-counterpart");
  return out;
}

Seed data_seed(Seed master, std::uint64_t index) { return derive_seed(master, "data", index); }

Arms generate_arms(const Scenario& scn, std::uint64_t index) {
  double mean_c = 0.0, mean_h = 0.0, sd_c = 1.0, sd_h = 1.0;
  if (scn.generator == Generator::MeanShift) {
    mean_c = scn.control_shift;
    mean_h = scn.historical_shift + scn.control_shift;
  } else {
    sd_c = std::sqrt(scn.control_shift);
    sd_h = std::sqrt(scn.historical_shift * scn.control_shift);
  }
  Rng rng(data_seed(scn.master_seed, index));
  std::vector<double> c(scn.sizes.m), h(scn.sizes.l), t(scn.sizes.n);
  rng.fill_normal(c, mean_c, sd_c);
  rng.fill_normal(h, mean_h, sd_h);
  rng.fill_normal(t, 0.0, 1.0);
  return {Sample::univariate(Arm::Current, std::move(c)),
          Sample::univariate(Arm::Historical, std::move(h)),
          Sample::univariate(Arm::Treatment, std::move(t))};
}

std::string method_key(CausalityMethod merged_method) {
  return "equivalence_ttp:" + std::string(to_string(merged_method));
}

namespace {

// Runs body(i) for i in [0, count) on `workers` threads. Failures are
// rethrown for the lowest failing index, with that index in the message.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body,
                  const std::function<std::string(std::size_t)>& context) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    loop();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.kind(), context(i) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(context(i) + ": " + e.what());
    }
  }
}

struct ReplicateOutcome {
  bool merged = false;
  bool reject = false;
  std::vector<char> extra_reject;
  bool no_fusion_reject = false;
  bool classic_merged = false;
  bool classic_reject = false;
};

ReplicateOutcome run_replicate(const Scenario& scn, std::uint64_t i) {
  const Arms arms = generate_arms(scn, i);
  const GramCache gram = build_gram(scn.ttp.kernel, arms.current, arms.historical, arms.treatment);
  const TTPReport report = run_ttp(gram, scn.ttp, i);

  ReplicateOutcome out;
  out.merged = report.fusion.merged;
  out.reject = report.causality.reject;
  for (CausalityMethod m : scn.extra_methods) {
    const bool r = report.fusion.merged
                       ? run_branch(gram, report.config_echo.causality, true, m).reject
                       : report.causality.reject;
    out.extra_reject.push_back(r);
  }
  if (scn.compare_no_fusion) {
    out.no_fusion_reject =
        report.fusion.merged
            ? run_branch(gram, report.config_echo.causality, false, scn.ttp.merged_method).reject
            : report.causality.reject;
  }
  if (scn.compare_classic) {
    TTPConfig classic = scn.ttp;
    classic.fusion.mode = FusionMode::ClassicPermutation;
    const TTPReport c = run_classic_ttp(gram, classic, i);
    out.classic_merged = c.fusion.merged;
    out.classic_reject = c.causality.reject;
  }
  return out;
}

MethodRate rate_of(std::size_t rejects, std::size_t merges, std::size_t total) {
  MethodRate r;
  r.reject_rate = static_cast<double>(rejects) / static_cast<double>(total);
  r.stderr_reject = binomial_stderr(r.reject_rate, total);
  r.merge_rate = static_cast<double>(merges) / static_cast<double>(total);
  return r;
}

}  // namespace

CampaignResult run_campaign(const Scenario& scn, std::size_t workers) {
  scn.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<ReplicateOutcome> outcomes(scn.replicates);
  parallel_for(
      scn.replicates, workers, [&](std::size_t i) { outcomes[i] = run_replicate(scn, i); },
      [&](std::size_t i) {
        return "replicate " + std::to_string(i) + " (data seed " +
               std::to_string(data_seed(scn.master_seed, i)) + ")";
      });

  CampaignResult res;
  res.scenario_echo = scn;
  res.generator_algorithm = std::string(kGeneratorAlgorithm);
  std::vector<std::size_t> extra(scn.extra_methods.size(), 0);
  std::size_t no_fusion = 0, classic_merges = 0, classic_rejects = 0;
  for (const ReplicateOutcome& o : outcomes) {
    res.merges += o.merged;
    res.rejections += o.reject;
    for (std::size_t k = 0; k < extra.size(); ++k) extra[k] += o.extra_reject[k] != 0;
    no_fusion += o.no_fusion_reject;
    classic_merges += o.classic_merged;
    classic_rejects += o.classic_reject;
  }
  const std::size_t total = scn.replicates;
  res.merge_rate = static_cast<double>(res.merges) / static_cast<double>(total);
  res.reject_rate = static_cast<double>(res.rejections) / static_cast<double>(total);
  res.stderr_merge = binomial_stderr(res.merge_rate, total);
  res.stderr_reject = binomial_stderr(res.reject_rate, total);

  const std::string main_key = scn.ttp.fusion.mode == FusionMode::Equivalence
                                   ? method_key(scn.ttp.merged_method)
                                   : std::string("classic_ttp");
  res.per_method_rates[main_key] = rate_of(res.rejections, res.merges, total);
  for (std::size_t k = 0; k < extra.size(); ++k) {
    res.per_method_rates[method_key(scn.extra_methods[k])] = rate_of(extra[k], res.merges, total);
  }
  if (scn.compare_no_fusion) res.per_method_rates["no_fusion"] = rate_of(no_fusion, 0, total);
  if (scn.compare_classic) {
    res.per_method_rates["classic_ttp"] = rate_of(classic_rejects, classic_merges, total);
  }
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

namespace {

struct ProbeDraws {
  std::vector<double> bootstrap;
  std::vector<double> permutation;
  double normal_variance = 0.0;
};

struct NullStats {
  double delta = 0.0;
  double t = 0.0;
};

double mixture_cdf(const std::vector<double>& variances, double x) {
  double s = 0.0;
  for (double v : variances) {
    if (v > 0.0) {
      s += normal_cdf(x / std::sqrt(v));
    } else {
      s += x >= 0.0 ? 1.0 : 0.0;
    }
  }
  return s / static_cast<double>(variances.size());
}

double mixture_quantile(const std::vector<double>& variances, double level) {
  double hi = 1.0;
  const double vmax = *std::max_element(variances.begin(), variances.end());
  if (vmax <= 0.0) return 0.0;
  hi = 20.0 * std::sqrt(vmax);
  double lo = -hi;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (mixture_cdf(variances, mid) >= level ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

NullStudyResult null_distribution_study(const Scenario& probe, const std::vector<double>& levels,
                                        std::size_t workers) {
  probe.validate();
  for (double a : levels) {
    if (!(a > 0.0 && a < 1.0)) fail(ErrorKind::InvalidArgument, "probe levels must lie in (0, 1)");
  }
  const Scenario null_scn = probe.null_counterpart();
  const std::size_t reps = probe.replicates;

  std::vector<ProbeDraws> draws(reps);
  std::vector<NullStats> nulls(reps);
  auto context = [&](std::size_t i) { return "null study replicate " + std::to_string(i); };

  parallel_for(
      reps, workers,
      [&](std::size_t i) {
        const Arms arms = generate_arms(probe, i);
        const GramCache gram =
            build_gram(probe.ttp.kernel, arms.current, arms.historical, arms.treatment);
        CausalityConfig cfg = probe.ttp.causality;
        cfg.seed = derive_stage_seeds(probe.master_seed, i).causality;
        draws[i].bootstrap = partial_bootstrap_reference(gram, cfg);
        draws[i].permutation = partial_permutation_reference(gram, cfg);
        draws[i].normal_variance = normal_approx_variance(gram);

        const Arms null_arms = generate_arms(null_scn, i);
        const GramCache null_gram = build_gram(null_scn.ttp.kernel, null_arms.current,
                                               null_arms.historical, null_arms.treatment);
        nulls[i].delta = partial_bootstrap_statistic(null_gram, cfg.estimator);
        nulls[i].t = partial_permutation_statistic(null_gram, cfg.estimator);
      },
      context);

  std::vector<double> true_delta, true_t, ref_pb, ref_pp, variances;
  for (std::size_t i = 0; i < reps; ++i) {
    true_delta.push_back(nulls[i].delta);
    true_t.push_back(nulls[i].t);
    ref_pb.insert(ref_pb.end(), draws[i].bootstrap.begin(), draws[i].bootstrap.end());
    ref_pp.insert(ref_pp.end(), draws[i].permutation.begin(), draws[i].permutation.end());
    variances.push_back(draws[i].normal_variance);
  }
  std::vector<double> sorted_delta = true_delta, sorted_t = true_t;
  std::sort(sorted_delta.begin(), sorted_delta.end());
  std::sort(sorted_t.begin(), sorted_t.end());

  NullStudyResult res;
  res.scenario_echo = probe;
  res.levels = levels;
  res.methods.push_back(
      {std::string(to_string(CausalityMethod::PartialBootstrap)), "delta", ks_distance(ref_pb, true_delta)});
  res.methods.push_back(
      {std::string(to_string(CausalityMethod::PartialPermutation)), "T", ks_distance(ref_pp, true_t)});
  res.methods.push_back({std::string(to_string(CausalityMethod::NormalApprox)), "delta",
                         ks_distance(true_delta, [&](double x) { return mixture_cdf(variances, x); })});

  for (double level : levels) {
    const double qd = inf_quantile_sorted(sorted_delta, level);
    const double qt = inf_quantile_sorted(sorted_t, level);
    const double pb = inf_quantile(ref_pb, level);
    const double pp = inf_quantile(ref_pp, level);
    const double na = mixture_quantile(variances, level);
    res.quantiles.push_back({res.methods[0].method, level, qd, pb, empirical_cdf(sorted_delta, pb)});
    res.quantiles.push_back({res.methods[1].method, level, qt, pp, empirical_cdf(sorted_t, pp)});
    res.quantiles.push_back({res.methods[2].method, level, qd, na, empirical_cdf(sorted_delta, na)});
  }
  return res;
}

}  // namespace ttp
