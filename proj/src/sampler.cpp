#include "fairenum/sampler.hpp"

#include <stdexcept>

namespace fairenum {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
  return mix64(mix64(master_seed) ^ mix64(trial_index + 0x632be59bd9b4e019ULL));
}

std::uint64_t bounded_draw(std::mt19937_64& engine, std::uint64_t bound) {
  // Lemire, "Fast Random Integer Generation in an Interval" (2019).
  unsigned __int128 product = static_cast<unsigned __int128>(engine()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t reject_below = (0 - bound) % bound;
    while (low < reject_below) {
      product = static_cast<unsigned __int128>(engine()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

UniformSampler::UniformSampler(std::uint64_t n, std::uint64_t seed) : n_(n), engine_(seed) {
  if (n == 0) throw std::invalid_argument("uniform sampler needs a non-empty universe");
}

}  // namespace fairenum
