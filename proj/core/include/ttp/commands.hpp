#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ttp/error.hpp"

namespace ttp {

enum class Command { Test, Simulate, NullStudy };

struct RunManifest {
  Command command = Command::Test;
  std::string config_path;  // empty: defaults only
  std::string output_path;  // empty: JSON to stdout, no table
  std::vector<std::string> overrides;  // key=value, applied after the file
  std::size_t workers = 1;
  std::optional<std::uint64_t> seed;  // applied last
};

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kInternal = 1;
inline constexpr int kConfig = 2;
inline constexpr int kData = 3;
inline constexpr int kStatistical = 4;
}  // namespace exit_code

int exit_code_for(ErrorKind kind) noexcept;
/// One-line remediation advice, or empty.
std::string error_hint(ErrorKind kind);

/// Each command returns the JSON document it wrote. The machine-readable
/// table goes to `<output_path>.tsv` when an output path is given.
nlohmann::json cmd_test(const RunManifest& manifest, std::ostream& out);
nlohmann::json cmd_simulate(const RunManifest& manifest, std::ostream& out);
nlohmann::json cmd_null_study(const RunManifest& manifest, std::ostream& out);

/// Runs the manifest's command, reporting errors on `err`; returns the exit code.
int run_command(const RunManifest& manifest, std::ostream& out, std::ostream& err);

}  // namespace ttp
