#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gskor::rng {

/// SplitMix64 finalizer; full-avalanche bijection on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Folds one word into a running hash. Chaining these over a tuple of
/// coordinates gives a stateless counter-based stream: the output depends
/// only on the coordinates, never on evaluation order.
constexpr std::uint64_t hash_word(std::uint64_t h, std::uint64_t w) noexcept {
  return mix64(h ^ (w + kGolden));
}

/// 53-bit uniform strictly inside (0, 1); safe for log().
constexpr double to_unit(std::uint64_t h) noexcept {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Deterministic substream addressed by (base seed, scenario, path).
/// Draw i of the stream is a pure function of the address and i, so
/// scheduling order and thread count cannot change any sample.
class PathStream {
 public:
  PathStream(std::uint64_t base_seed, std::uint64_t scenario, std::uint64_t path) noexcept
      : key_(hash_word(hash_word(hash_word(kGolden, base_seed), scenario), path)) {}

  double uniform(std::uint64_t draw) const noexcept { return to_unit(hash_word(key_, draw)); }

  /// Standard normal via Box-Muller; consumes draws 2i and 2i+1.
  double normal(std::uint64_t i) const noexcept {
    const double u1 = uniform(2 * i);
    const double u2 = uniform(2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

/// Small stateful generator for randomized test inputs. SplitMix64 stream.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  double uniform() noexcept { return to_unit(next()); }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t index(std::uint64_t n) noexcept { return n == 0 ? 0 : next() % n; }

  /// Independent child seed; lets trials own private generators.
  std::uint64_t fork() noexcept { return next(); }

 private:
  std::uint64_t state_;
};

}  // namespace gskor::rng
