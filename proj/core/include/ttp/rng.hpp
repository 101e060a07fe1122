#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace ttp {

using Seed = std::uint64_t;

/// Recorded alongside simulation output so that a run can be replayed bit for bit.
inline constexpr std::string_view kGeneratorAlgorithm =
    "mt19937_64; substreams=splitmix64(master,fnv1a64(label),index); "
    "bounded=lemire-multiply-reject; normal=marsaglia-polar";

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Deterministic substream seed for a named stage and an index (replicate, draw, ...).
Seed derive_seed(Seed master, std::string_view label, std::uint64_t index = 0) noexcept;

/// Thin wrapper over mt19937_64 with portable variate algorithms. The standard
/// library distributions are implementation-defined, so none of them is used.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::size_t uniform_index(std::size_t bound);

  double normal();

  void fill_normal(std::span<double> out, double mean, double sd);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ttp
