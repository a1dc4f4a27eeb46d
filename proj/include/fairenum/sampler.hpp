#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <random>

namespace fairenum {

/// A source of elements. `draw()` returns the next element, or std::nullopt
/// when the source can deliver no more (external streams only).
template <typename S>
concept Sampler = requires(S& s) {
  typename S::element_type;
  { s.draw() } -> std::same_as<std::optional<typename S::element_type>>;
};

/// Samplers whose elements are integers in [0, universe_size()). Drivers use
/// a dense bitmap instead of a hash set for these.
template <typename S>
concept DenseSampler = Sampler<S> && std::unsigned_integral<typename S::element_type> &&
                       requires(const S& s) {
                         { s.universe_size() } -> std::convertible_to<std::uint64_t>;
                       };

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for trial `trial_index` of a run seeded with `master_seed`. Trials
/// get independent streams that depend only on (master_seed, trial_index).
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept;

/// Uniform in [0, bound) from 64-bit engine output via multiply-shift with
/// rejection. Portable: only depends on the engine's raw output sequence.
std::uint64_t bounded_draw(std::mt19937_64& engine, std::uint64_t bound);

/// Fair sampler over {0, ..., n-1}.
class UniformSampler {
 public:
  using element_type = std::uint64_t;

  /// Throws std::invalid_argument if n == 0.
  UniformSampler(std::uint64_t n, std::uint64_t seed);

  std::optional<element_type> draw() { return bounded_draw(engine_, n_); }
  std::uint64_t universe_size() const noexcept { return n_; }

 private:
  std::uint64_t n_;
  std::mt19937_64 engine_;
};

/// Wraps a sampler and counts draw() calls.
template <Sampler S>
class CountingSampler {
 public:
  using element_type = typename S::element_type;

  explicit CountingSampler(S& inner) : inner_(&inner) {}

  std::optional<element_type> draw() {
    ++calls_;
    return inner_->draw();
  }

  std::uint64_t calls() const noexcept { return calls_; }

 private:
  S* inner_;
  std::uint64_t calls_ = 0;
};

}  // namespace fairenum
