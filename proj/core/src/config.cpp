#include "ttp/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ttp/error.hpp"

namespace ttp {

namespace {

enum class Type { String, Real, Count, Seed, Bool, Bandwidth, RealList, MethodList, Enum };

struct KeySpec {
  const char* name;
  Type type;
  const char* fallback;
  bool sweep;
  std::vector<std::string_view> choices = {};
};

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"seed", Type::Seed, "0", false},
      {"kernel.family", Type::Enum, "rbf", true, {"rbf", "linear", "imq", "linear_rbf"}},
      {"kernel.bandwidth", Type::Bandwidth, "median", true},
      {"kernel.epsilon", Type::Real, "1", true},
      {"fusion.mode", Type::Enum, "equivalence", true, {"equivalence", "classic"}},
      {"fusion.theta", Type::Real, "0.4", true},
      {"fusion.alpha", Type::Real, "0.05", true},
      {"fusion.num_bootstrap", Type::Count, "1000", true},
      {"causality.alpha", Type::Real, "0.05", true},
      {"causality.num_resamples", Type::Count, "1000", true},
      {"causality.estimator", Type::Enum, "vstat", true, {"vstat", "ustat"}},
      {"causality.merged_method", Type::Enum, "partial_bootstrap", true,
       {"partial_bootstrap", "partial_permutation", "normal_approx"}},
      {"data.path", Type::String, "", false},
      {"scenario.generator", Type::Enum, "mean_shift", true, {"mean_shift", "var_shift"}},
      {"scenario.control_shift", Type::Real, "0", true},
      {"scenario.historical_shift", Type::Real, "0", true},
      {"scenario.n", Type::Count, "100", true},
      {"scenario.m", Type::Count, "50", true},
      {"scenario.l", Type::Count, "100", true},
      {"scenario.replicates", Type::Count, "1000", true},
      {"scenario.extra_methods", Type::MethodList, "[]", false},
      {"scenario.compare_no_fusion", Type::Bool, "false", false},
      {"scenario.compare_classic", Type::Bool, "false", false},
      {"null_study.levels", Type::RealList, "[0.5, 0.9, 0.95]", false},
  };
  return keys;
}

const KeySpec& spec_of(const std::string& key) {
  for (const KeySpec& k : schema()) {
    if (key == k.name) return k;
  }
  fail(ErrorKind::ConfigError, "unknown configuration key '" + key + "'");
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_list(std::string_view v) { return v.size() >= 2 && v.front() == '[' && v.back() == ']'; }

std::vector<std::string> split_list(const std::string& key, std::string_view v) {
  std::vector<std::string> items;
  const std::string inner = trim(v.substr(1, v.size() - 2));
  if (inner.empty()) return items;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = inner.find(',', start);
    std::string item = trim(std::string_view(inner).substr(start, comma - start));
    if (item.empty()) fail(ErrorKind::ConfigError, "empty list element for '" + key + "'");
    items.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string_view s) {
  auto v = parse_number<double>(s);
  if (v && !std::isfinite(*v)) return std::nullopt;
  return v;
}

void check_scalar(const KeySpec& k, const std::string& v) {
  auto bad = [&](const std::string& want) {
    fail(ErrorKind::ConfigError,
         "invalid value '" + v + "' for '" + k.name + "': expected " + want);
  };
  switch (k.type) {
    case Type::String: break;
    case Type::Real:
      if (!parse_real(v)) bad("a finite real number");
      break;
    case Type::Count:
      if (!parse_number<std::uint64_t>(v)) bad("a nonnegative integer");
      break;
    case Type::Seed:
      if (!parse_number<std::uint64_t>(v)) bad("an unsigned 64-bit integer");
      break;
    case Type::Bool:
      if (v != "true" && v != "false") bad("true or false");
      break;
    case Type::Bandwidth:
      if (v != "median") {
        auto x = parse_real(v);
        if (!x || *x <= 0.0) bad("'median' or a positive real");
      }
      break;
    case Type::Enum:
      if (std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end()) {
        std::string all;
        for (auto c : k.choices) all += (all.empty() ? "" : ", ") + std::string(c);
        bad("one of {" + all + "}");
      }
      break;
    case Type::RealList:
      if (!parse_real(v)) bad("a list of real numbers");
      break;
    case Type::MethodList:
      if (!parse_causality_method(v) || !is_merged_method(*parse_causality_method(v))) {
        bad("a list of merged-branch methods");
      }
      break;
  }
}

bool list_typed(Type t) { return t == Type::RealList || t == Type::MethodList; }

std::vector<std::string> parse_value(const KeySpec& k, std::string_view raw_text) {
  const std::string v = trim(raw_text);
  if (v.empty()) fail(ErrorKind::ConfigError, std::string("empty value for '") + k.name + "'");
  std::vector<std::string> items;
  if (is_list(v)) {
    if (!list_typed(k.type) && !k.sweep) {
      fail(ErrorKind::ConfigError, std::string("'") + k.name + "' does not accept a list");
    }
    items = split_list(k.name, v);
    if (items.empty() && !list_typed(k.type)) {
      fail(ErrorKind::ConfigError, std::string("empty sweep list for '") + k.name + "'");
    }
  } else {
    if (list_typed(k.type)) {
      fail(ErrorKind::ConfigError, std::string("'") + k.name + "' expects a [list]");
    }
    items.push_back(v);
  }
  for (const std::string& item : items) check_scalar(k, item);
  return items;
}

nlohmann::json typed(const KeySpec& k, const std::string& v) {
  switch (k.type) {
    case Type::Real:
    case Type::RealList: return *parse_real(v);
    case Type::Count:
    case Type::Seed: return *parse_number<std::uint64_t>(v);
    case Type::Bool: return v == "true";
    case Type::Bandwidth:
      if (v == "median") return v;
      return *parse_real(v);
    default: return v;
  }
}

}  // namespace

Config Config::parse(std::string_view text, std::string_view origin) {
  Config cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(lineno);
    if (eq == std::string::npos) fail(ErrorKind::ConfigError, where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (cfg.has(key)) fail(ErrorKind::ConfigError, where + ": duplicate key '" + key + "'");
    try {
      cfg.set(key, std::string_view(body).substr(eq + 1));
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, where + ": " + e.message());
    }
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void Config::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    fail(ErrorKind::ConfigError, "override '" + std::string(assignment) + "' is not key=value");
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void Config::set(const std::string& key, std::string_view raw_value) {
  values_[key] = parse_value(spec_of(key), raw_value);
}

const std::vector<std::string>& Config::raw(const std::string& key) const {
  static std::map<std::string, std::vector<std::string>> defaults = [] {
    std::map<std::string, std::vector<std::string>> d;
    for (const KeySpec& k : schema()) {
      d[k.name] = *k.fallback ? parse_value(k, k.fallback) : std::vector<std::string>{""};
    }
    return d;
  }();
  spec_of(key);
  auto it = values_.find(key);
  return it != values_.end() ? it->second : defaults.at(key);
}

bool Config::is_grid() const {
  for (const KeySpec& k : schema()) {
    if (k.sweep && raw(k.name).size() > 1) return true;
  }
  return false;
}

std::vector<Config> Config::expand() const {
  std::vector<Config> cells{*this};
  for (const KeySpec& k : schema()) {
    const auto& vals = raw(k.name);
    if (!k.sweep || vals.size() <= 1) continue;
    std::vector<Config> next;
    next.reserve(cells.size() * vals.size());
    for (const Config& c : cells) {
      for (const std::string& v : vals) {
        Config cell = c;
        cell.values_[k.name] = {v};
        next.push_back(std::move(cell));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

std::string Config::get_string(const std::string& key) const {
  const auto& v = raw(key);
  if (v.size() != 1) fail(ErrorKind::ConfigError, "'" + key + "' holds a sweep list; expand the grid first");
  return v.front();
}

double Config::get_double(const std::string& key) const { return *parse_real(get_string(key)); }

std::uint64_t Config::get_u64(const std::string& key) const {
  return *parse_number<std::uint64_t>(get_string(key));
}

bool Config::get_bool(const std::string& key) const { return get_string(key) == "true"; }

std::vector<std::string> Config::get_list(const std::string& key) const { return raw(key); }

nlohmann::json Config::effective() const {
  nlohmann::json out = nlohmann::json::object();
  for (const KeySpec& k : schema()) {
    const auto& vals = raw(k.name);
    if (list_typed(k.type) || vals.size() > 1) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& v : vals) arr.push_back(typed(k, v));
      out[k.name] = arr;
    } else {
      out[k.name] = typed(k, vals.front());
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> Config::documented_keys() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const KeySpec& k : schema()) out.emplace_back(k.name, k.fallback);
  return out;
}

namespace {

// Range errors found while assembling typed configs are configuration errors.
template <class F>
auto as_config_error(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) fail(ErrorKind::ConfigError, e.message());
    throw;
  }
}

}  // namespace

KernelSpec kernel_from(const Config& cfg) {
  return as_config_error([&] {
    KernelSpec k;
    k.family = *parse_kernel_family(cfg.get_string("kernel.family"));
    const std::string bw = cfg.get_string("kernel.bandwidth");
    if (bw == "median") {
      k.bandwidth_policy = BandwidthPolicy::MedianHeuristic;
    } else {
      k.bandwidth_policy = BandwidthPolicy::Fixed;
      k.fixed_bandwidth = cfg.get_double("kernel.bandwidth");
    }
    k.epsilon = cfg.get_double("kernel.epsilon");
    k.validate();
    return k;
  });
}

TTPConfig ttp_config_from(const Config& cfg) {
  return as_config_error([&] {
    TTPConfig t;
    t.kernel = kernel_from(cfg);
    t.fusion.mode = *parse_fusion_mode(cfg.get_string("fusion.mode"));
    t.fusion.theta = cfg.get_double("fusion.theta");
    t.fusion.alpha = cfg.get_double("fusion.alpha");
    t.fusion.num_bootstrap = cfg.get_u64("fusion.num_bootstrap");
    t.causality.alpha = cfg.get_double("causality.alpha");
    t.causality.num_resamples = cfg.get_u64("causality.num_resamples");
    t.causality.estimator =
        cfg.get_string("causality.estimator") == "ustat" ? Estimator::UStat : Estimator::VStat;
    t.merged_method = *parse_causality_method(cfg.get_string("causality.merged_method"));
    t.master_seed = cfg.get_u64("seed");
    t.fusion.validate();
    t.causality.validate();
    t.validate();
    return t;
  });
}

Scenario scenario_from(const Config& cfg) {
  return as_config_error([&] {
    Scenario s;
    s.generator = *parse_generator(cfg.get_string("scenario.generator"));
    s.control_shift = cfg.get_double("scenario.control_shift");
    s.historical_shift = cfg.get_double("scenario.historical_shift");
    s.sizes = {cfg.get_u64("scenario.n"), cfg.get_u64("scenario.m"), cfg.get_u64("scenario.l")};
    s.ttp = ttp_config_from(cfg);
    s.replicates = cfg.get_u64("scenario.replicates");
    s.master_seed = cfg.get_u64("seed");
    for (const std::string& m : cfg.get_list("scenario.extra_methods")) {
      s.extra_methods.push_back(*parse_causality_method(m));
    }
    s.compare_no_fusion = cfg.get_bool("scenario.compare_no_fusion");
    s.compare_classic = cfg.get_bool("scenario.compare_classic");
    s.validate();
    return s;
  });
}

std::vector<double> null_levels_from(const Config& cfg) {
  std::vector<double> out;
  for (const std::string& v : cfg.get_list("null_study.levels")) {
    const double x = *parse_real(v);
    if (!(x > 0.0 && x < 1.0)) fail(ErrorKind::ConfigError, "null_study.levels must lie in (0, 1)");
    out.push_back(x);
  }
  if (out.empty()) fail(ErrorKind::ConfigError, "null_study.levels must not be empty");
  return out;
}

}  // namespace ttp
