#include "ttp/rng.hpp"

#include <cmath>

namespace ttp {

namespace {

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

__extension__ using u128 = unsigned __int128;

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Seed derive_seed(Seed master, std::string_view label, std::uint64_t index) noexcept {
  std::uint64_t state = master;
  std::uint64_t a = splitmix64(state);
  state ^= fnv1a64(label);
  std::uint64_t b = splitmix64(state);
  state ^= index * 0xd1b54a32d192ed03ULL;
  std::uint64_t c = splitmix64(state);
  return a ^ (b << 1) ^ (c << 2) ^ c;
}

std::size_t Rng::uniform_index(std::size_t bound) {
  const auto range = static_cast<std::uint64_t>(bound);
  u128 product = static_cast<u128>(engine_()) * range;
  auto low = static_cast<std::uint64_t>(product);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      product = static_cast<u128>(engine_()) * range;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::size_t>(product >> 64);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

void Rng::fill_normal(std::span<double> out, double mean, double sd) {
  for (double& x : out) x = mean + sd * normal();
}

}  // namespace ttp
