#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttp/pipeline.hpp"
#include "ttp/simulation.hpp"

namespace ttp {

/// Flat `key = value` configuration with a fixed typed schema.
///
/// Lines are `key = value` or `key = [v1, v2, ...]`; `#` starts a comment.
/// A list on a sweep key defines a grid axis; list-typed keys take a list as
/// one value. Unknown keys and ill-typed values raise ConfigError.
class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text, std::string_view origin = "<config>");
  static Config load(const std::filesystem::path& path);

  /// Applies `key=value` (same value syntax as the file).
  void set(std::string_view assignment);
  void set(const std::string& key, std::string_view raw_value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  bool is_grid() const;
  /// Cartesian product over sweep keys holding more than one value. Keys
  /// vary in schema order with the last one fastest.
  std::vector<Config> expand() const;

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

  /// Every schema key with its effective (default-filled) value.
  nlohmann::json effective() const;

  /// Documented keys in schema order, with defaults, for help output.
  static std::vector<std::pair<std::string, std::string>> documented_keys();

 private:
  const std::vector<std::string>& raw(const std::string& key) const;
  std::map<std::string, std::vector<std::string>> values_;
};

KernelSpec kernel_from(const Config& cfg);
TTPConfig ttp_config_from(const Config& cfg);
Scenario scenario_from(const Config& cfg);
std::vector<double> null_levels_from(const Config& cfg);

}  // namespace ttp
