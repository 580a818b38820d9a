#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace trirem {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t splitmix_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Counter-based 64-bit generator: the k-th output is
/// splitmix_mix(seed + (k + 1) * kGoldenGamma). The stream depends only on
/// the seed and the counter, so results are identical on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += kGoldenGamma;
    return splitmix_mix(state_);
  }
  std::uint64_t operator()() noexcept { return next(); }

  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  /// Uniform integer in [0, bound) by rejection; no modulo bias.
  /// bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates shuffle driven by SplitMix64, bit-reproducible across
/// standard library implementations (unlike std::shuffle).
template <class T>
void shuffle(std::span<T> items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

/// Per-run seed for replicate `replicate` of size `n` under `master`:
///   h0 = mix(master + gamma)
///   h1 = mix(h0 ^ (n * gamma))
///   seed = mix(h1 ^ (replicate + 1) * gamma)
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n,
                                    std::uint64_t replicate) noexcept {
  std::uint64_t h = splitmix_mix(master + kGoldenGamma);
  h = splitmix_mix(h ^ (n * kGoldenGamma));
  return splitmix_mix(h ^ ((replicate + 1) * kGoldenGamma));
}

}  // namespace trirem
