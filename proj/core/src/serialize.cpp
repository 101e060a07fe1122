#include "ttp/serialize.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "ttp/error.hpp"

namespace ttp {

using nlohmann::json;

namespace {

template <class E, class Parse>
E enum_from(const json& j, Parse parse, const char* what) {
  const auto text = j.get<std::string>();
  const auto v = parse(text);
  if (!v) fail(ErrorKind::ParseError, std::string("unknown ") + what + " '" + text + "'");
  return *v;
}

std::optional<Estimator> parse_estimator(std::string_view s) {
  if (s == "vstat") return Estimator::VStat;
  if (s == "ustat") return Estimator::UStat;
  return std::nullopt;
}
std::string_view estimator_name(Estimator e) { return e == Estimator::VStat ? "vstat" : "ustat"; }

std::optional<BandwidthPolicy> parse_policy(std::string_view s) {
  if (s == "median") return BandwidthPolicy::MedianHeuristic;
  if (s == "fixed") return BandwidthPolicy::Fixed;
  return std::nullopt;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

void to_json(json& j, const KernelSpec& v) {
  j = {{"family", to_string(v.family)},
       {"bandwidth_policy", v.bandwidth_policy == BandwidthPolicy::Fixed ? "fixed" : "median"},
       {"fixed_bandwidth", v.fixed_bandwidth},
       {"epsilon", v.epsilon}};
}
void from_json(const json& j, KernelSpec& v) {
  v.family = enum_from<KernelFamily>(j.at("family"), parse_kernel_family, "kernel family");
  v.bandwidth_policy = enum_from<BandwidthPolicy>(j.at("bandwidth_policy"), parse_policy, "bandwidth policy");
  v.fixed_bandwidth = j.at("fixed_bandwidth").get<double>();
  v.epsilon = j.at("epsilon").get<double>();
}

void to_json(json& j, const FusionConfig& v) {
  j = {{"theta", v.theta},          {"alpha", v.alpha},
       {"num_bootstrap", v.num_bootstrap}, {"mode", to_string(v.mode)},
       {"estimator", estimator_name(v.estimator)}, {"seed", v.seed}};
}
void from_json(const json& j, FusionConfig& v) {
  v.theta = j.at("theta").get<double>();
  v.alpha = j.at("alpha").get<double>();
  v.num_bootstrap = j.at("num_bootstrap").get<std::size_t>();
  v.mode = enum_from<FusionMode>(j.at("mode"), parse_fusion_mode, "fusion mode");
  v.estimator = enum_from<Estimator>(j.at("estimator"), parse_estimator, "estimator");
  v.seed = j.at("seed").get<Seed>();
}

void to_json(json& j, const FusionOutcome& v) {
  j = {{"statistic", v.statistic}, {"critical_value", v.critical_value}, {"merged", v.merged},
       {"mode", to_string(v.mode)}, {"resamples_used", v.resamples_used}};
}
void from_json(const json& j, FusionOutcome& v) {
  v.statistic = j.at("statistic").get<double>();
  v.critical_value = j.at("critical_value").get<double>();
  v.merged = j.at("merged").get<bool>();
  v.mode = enum_from<FusionMode>(j.at("mode"), parse_fusion_mode, "fusion mode");
  v.resamples_used = j.at("resamples_used").get<std::size_t>();
}

void to_json(json& j, const CausalityConfig& v) {
  j = {{"alpha", v.alpha}, {"num_resamples", v.num_resamples}, {"method", to_string(v.method)},
       {"estimator", estimator_name(v.estimator)}, {"seed", v.seed}};
}
void from_json(const json& j, CausalityConfig& v) {
  v.alpha = j.at("alpha").get<double>();
  v.num_resamples = j.at("num_resamples").get<std::size_t>();
  v.method = enum_from<CausalityMethod>(j.at("method"), parse_causality_method, "causality method");
  v.estimator = enum_from<Estimator>(j.at("estimator"), parse_estimator, "estimator");
  v.seed = j.at("seed").get<Seed>();
}

void to_json(json& j, const CausalityOutcome& v) {
  j = {{"statistic", v.statistic},        {"critical_value", v.critical_value},
       {"reject", v.reject},              {"method", to_string(v.method)},
       {"merged_analysis", v.merged_analysis}, {"resamples_used", v.resamples_used}};
}
void from_json(const json& j, CausalityOutcome& v) {
  v.statistic = j.at("statistic").get<double>();
  v.critical_value = j.at("critical_value").get<double>();
  v.reject = j.at("reject").get<bool>();
  v.method = enum_from<CausalityMethod>(j.at("method"), parse_causality_method, "causality method");
  v.merged_analysis = j.at("merged_analysis").get<bool>();
  v.resamples_used = j.at("resamples_used").get<std::size_t>();
}

void to_json(json& j, const DiagnosticsReport& v) {
  j = {{"d_hat_ch", v.d_hat_ch}, {"d_hat_ct", v.d_hat_ct}, {"gamma", v.gamma},
       {"lambda", v.lambda}, {"sufficient_consistency", v.sufficient_consistency}};
}
void from_json(const json& j, DiagnosticsReport& v) {
  v.d_hat_ch = j.at("d_hat_ch").get<double>();
  v.d_hat_ct = j.at("d_hat_ct").get<double>();
  v.gamma = j.at("gamma").get<double>();
  v.lambda = j.at("lambda").get<double>();
  v.sufficient_consistency = j.at("sufficient_consistency").get<bool>();
}

void to_json(json& j, const TTPConfig& v) {
  j = {{"kernel", v.kernel}, {"fusion", v.fusion}, {"causality", v.causality},
       {"merged_method", to_string(v.merged_method)}, {"master_seed", v.master_seed}};
}
void from_json(const json& j, TTPConfig& v) {
  v.kernel = j.at("kernel").get<KernelSpec>();
  v.fusion = j.at("fusion").get<FusionConfig>();
  v.causality = j.at("causality").get<CausalityConfig>();
  v.merged_method =
      enum_from<CausalityMethod>(j.at("merged_method"), parse_causality_method, "causality method");
  v.master_seed = j.at("master_seed").get<Seed>();
}

void to_json(json& j, const SeedRecord& v) {
  j = {{"master", v.master}, {"stream", v.stream}, {"fusion", v.fusion}, {"causality", v.causality}};
}
void from_json(const json& j, SeedRecord& v) {
  v.master = j.at("master").get<Seed>();
  v.stream = j.at("stream").get<std::uint64_t>();
  v.fusion = j.at("fusion").get<Seed>();
  v.causality = j.at("causality").get<Seed>();
}

void to_json(json& j, const TTPReport& v) {
  j = {{"fusion", v.fusion},
       {"causality", v.causality},
       {"diagnostics", v.diagnostics},
       {"config_echo", v.config_echo},
       {"bandwidth_pooled", optional_number(v.bandwidth_pooled)},
       {"bandwidth_two_arm", optional_number(v.bandwidth_two_arm)},
       {"bandwidth_used", optional_number(v.bandwidth_used)},
       {"seeds", v.seeds}};
}
void from_json(const json& j, TTPReport& v) {
  v.fusion = j.at("fusion").get<FusionOutcome>();
  v.causality = j.at("causality").get<CausalityOutcome>();
  v.diagnostics = j.at("diagnostics").get<DiagnosticsReport>();
  v.config_echo = j.at("config_echo").get<TTPConfig>();
  v.bandwidth_pooled = optional_from(j.at("bandwidth_pooled"));
  v.bandwidth_two_arm = optional_from(j.at("bandwidth_two_arm"));
  v.bandwidth_used = optional_from(j.at("bandwidth_used"));
  v.seeds = j.at("seeds").get<SeedRecord>();
}

void to_json(json& j, const Scenario& v) {
  json extra = json::array();
  for (CausalityMethod m : v.extra_methods) extra.push_back(to_string(m));
  j = {{"generator", to_string(v.generator)},
       {"control_shift", v.control_shift},
       {"historical_shift", v.historical_shift},
       {"n", v.sizes.n},
       {"m", v.sizes.m},
       {"l", v.sizes.l},
       {"ttp", v.ttp},
       {"replicates", v.replicates},
       {"master_seed", v.master_seed},
       {"extra_methods", extra},
       {"compare_no_fusion", v.compare_no_fusion},
       {"compare_classic", v.compare_classic}};
}
void from_json(const json& j, Scenario& v) {
  v.generator = enum_from<Generator>(j.at("generator"), parse_generator, "generator");
  v.control_shift = j.at("control_shift").get<double>();
  v.historical_shift = j.at("historical_shift").get<double>();
  v.sizes = {j.at("n").get<std::size_t>(), j.at("m").get<std::size_t>(),
             j.at("l").get<std::size_t>()};
  v.ttp = j.at("ttp").get<TTPConfig>();
  v.replicates = j.at("replicates").get<std::size_t>();
  v.master_seed = j.at("master_seed").get<Seed>();
  v.extra_methods.clear();
  for (const json& m : j.at("extra_methods")) {
    v.extra_methods.push_back(enum_from<CausalityMethod>(m, parse_causality_method, "causality method"));
  }
  v.compare_no_fusion = j.at("compare_no_fusion").get<bool>();
  v.compare_classic = j.at("compare_classic").get<bool>();
}

void to_json(json& j, const MethodRate& v) {
  j = {{"reject_rate", v.reject_rate}, {"stderr_reject", v.stderr_reject}, {"merge_rate", v.merge_rate}};
}
void from_json(const json& j, MethodRate& v) {
  v.reject_rate = j.at("reject_rate").get<double>();
  v.stderr_reject = j.at("stderr_reject").get<double>();
  v.merge_rate = j.at("merge_rate").get<double>();
}

void to_json(json& j, const CampaignResult& v) {
  j = {{"scenario", v.scenario_echo},
       {"merges", v.merges},
       {"rejections", v.rejections},
       {"merge_rate", v.merge_rate},
       {"reject_rate", v.reject_rate},
       {"stderr_merge", v.stderr_merge},
       {"stderr_reject", v.stderr_reject},
       {"per_method_rates", v.per_method_rates},
       {"generator_algorithm", v.generator_algorithm}};
}
void from_json(const json& j, CampaignResult& v) {
  v.scenario_echo = j.at("scenario").get<Scenario>();
  v.merges = j.at("merges").get<std::size_t>();
  v.rejections = j.at("rejections").get<std::size_t>();
  v.merge_rate = j.at("merge_rate").get<double>();
  v.reject_rate = j.at("reject_rate").get<double>();
  v.stderr_merge = j.at("stderr_merge").get<double>();
  v.stderr_reject = j.at("stderr_reject").get<double>();
  v.per_method_rates = j.at("per_method_rates").get<std::map<std::string, MethodRate>>();
  v.generator_algorithm = j.at("generator_algorithm").get<std::string>();
  v.wall_time = 0.0;
}

void to_json(json& j, const NullQuantileRow& v) {
  j = {{"method", v.method}, {"level", v.level}, {"true_quantile", v.true_quantile},
       {"reference_quantile", v.reference_quantile}, {"mapped_level", v.mapped_level}};
}
void from_json(const json& j, NullQuantileRow& v) {
  v.method = j.at("method").get<std::string>();
  v.level = j.at("level").get<double>();
  v.true_quantile = j.at("true_quantile").get<double>();
  v.reference_quantile = j.at("reference_quantile").get<double>();
  v.mapped_level = j.at("mapped_level").get<double>();
}

void to_json(json& j, const NullMethodSummary& v) {
  j = {{"method", v.method}, {"target", v.target}, {"ks", v.ks}};
}
void from_json(const json& j, NullMethodSummary& v) {
  v.method = j.at("method").get<std::string>();
  v.target = j.at("target").get<std::string>();
  v.ks = j.at("ks").get<double>();
}

void to_json(json& j, const NullStudyResult& v) {
  j = {{"scenario", v.scenario_echo}, {"levels", v.levels}, {"methods", v.methods},
       {"quantiles", v.quantiles}};
}
void from_json(const json& j, NullStudyResult& v) {
  v.scenario_echo = j.at("scenario").get<Scenario>();
  v.levels = j.at("levels").get<std::vector<double>>();
  v.methods = j.at("methods").get<std::vector<NullMethodSummary>>();
  v.quantiles = j.at("quantiles").get<std::vector<NullQuantileRow>>();
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string bandwidth_text(const KernelSpec& k) {
  if (!k.uses_bandwidth()) return "none";
  return k.bandwidth_policy == BandwidthPolicy::MedianHeuristic ? "median"
                                                                : format_double(k.fixed_bandwidth);
}

void row(std::ostringstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
  out << '\n';
}

std::vector<std::string> scenario_cells(const Scenario& s) {
  return {std::string(to_string(s.generator)),
          format_double(s.control_shift),
          format_double(s.historical_shift),
          std::to_string(s.sizes.n),
          std::to_string(s.sizes.m),
          std::to_string(s.sizes.l),
          std::string(to_string(s.ttp.kernel.family)),
          bandwidth_text(s.ttp.kernel),
          std::string(to_string(s.ttp.fusion.mode)),
          format_double(s.ttp.fusion.theta),
          std::string(to_string(s.ttp.merged_method)),
          std::to_string(s.replicates),
          std::to_string(s.master_seed)};
}

const std::vector<std::string> kScenarioHeader = {
    "generator", "control_shift", "historical_shift", "n",      "m",
    "l",         "kernel",        "bandwidth",        "fusion", "theta",
    "merged_method", "replicates", "seed"};

}  // namespace

std::string report_table(const TTPReport& r) {
  std::ostringstream out;
  row(out, {"fusion_statistic", "fusion_critical", "merged", "method", "statistic", "critical",
            "reject", "d_hat_ch", "d_hat_ct", "gamma", "lambda", "sufficient_consistency",
            "bandwidth_pooled", "bandwidth_two_arm", "bandwidth_used", "fusion_seed",
            "causality_seed"});
  row(out, {format_double(r.fusion.statistic), format_double(r.fusion.critical_value),
            r.fusion.merged ? "1" : "0", std::string(to_string(r.causality.method)),
            format_double(r.causality.statistic), format_double(r.causality.critical_value),
            r.causality.reject ? "1" : "0", format_double(r.diagnostics.d_hat_ch),
            format_double(r.diagnostics.d_hat_ct), format_double(r.diagnostics.gamma),
            format_double(r.diagnostics.lambda), r.diagnostics.sufficient_consistency ? "1" : "0",
            opt(r.bandwidth_pooled), opt(r.bandwidth_two_arm), opt(r.bandwidth_used),
            std::to_string(r.seeds.fusion), std::to_string(r.seeds.causality)});
  return out.str();
}

std::string campaign_table(const std::vector<CampaignResult>& cells) {
  std::set<std::string> keys;
  for (const auto& c : cells) {
    for (const auto& [k, unused] : c.per_method_rates) keys.insert(k);
  }
  std::ostringstream out;
  std::vector<std::string> header = kScenarioHeader;
  for (const char* h : {"merge_rate", "stderr_merge", "reject_rate", "stderr_reject"}) header.emplace_back(h);
  for (const auto& k : keys) {
    header.push_back("reject[" + k + "]");
    header.push_back("stderr[" + k + "]");
    header.push_back("merge[" + k + "]");
  }
  row(out, header);
  for (const auto& c : cells) {
    std::vector<std::string> cellv = scenario_cells(c.scenario_echo);
    cellv.push_back(format_double(c.merge_rate));
    cellv.push_back(format_double(c.stderr_merge));
    cellv.push_back(format_double(c.reject_rate));
    cellv.push_back(format_double(c.stderr_reject));
    for (const auto& k : keys) {
      auto it = c.per_method_rates.find(k);
      if (it == c.per_method_rates.end()) {
        cellv.insert(cellv.end(), 3, "");
      } else {
        cellv.push_back(format_double(it->second.reject_rate));
        cellv.push_back(format_double(it->second.stderr_reject));
        cellv.push_back(format_double(it->second.merge_rate));
      }
    }
    row(out, cellv);
  }
  return out.str();
}

std::string null_study_table(const std::vector<NullStudyResult>& cells) {
  std::ostringstream out;
  std::vector<std::string> header = kScenarioHeader;
  for (const char* h : {"method", "target", "ks", "level", "true_quantile", "reference_quantile",
                        "mapped_level"}) {
    header.emplace_back(h);
  }
  row(out, header);
  for (const auto& c : cells) {
    const auto base = scenario_cells(c.scenario_echo);
    for (const auto& q : c.quantiles) {
      std::vector<std::string> r = base;
      for (const auto& m : c.methods) {
        if (m.method == q.method) {
          r.push_back(m.method);
          r.push_back(m.target);
          r.push_back(format_double(m.ks));
        }
      }
      r.push_back(format_double(q.level));
      r.push_back(format_double(q.true_quantile));
      r.push_back(format_double(q.reference_quantile));
      r.push_back(format_double(q.mapped_level));
      row(out, r);
    }
  }
  return out.str();
}

}  // namespace ttp
