#pragma once

#include <cstdint>

namespace spreadlab {

/// SplitMix64 finalizer. Bijective on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Deterministic substream seed for (seed, index). Distinct indices give
/// unrelated seeds; used to key independent sampling stages off one master
/// seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^
               mix64(index + 0xd1b54a32d192ed03ULL));
}

/// Counter-based pseudo-random stream (SplitMix64).
///
/// The stream state is a plain counter, so a stream is a pure function of
/// its seed and draw index: the same (seed, index) pair always produces the
/// same substream, on any platform, under any degree of parallelism. All
/// randomness in the library flows through this type; std:: distributions
/// are avoided because their output is implementation-defined.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) noexcept : counter_(seed) {}

  /// Substream `index` of master seed `seed`. Distinct indices give
  /// statistically independent streams without any cross-worker state.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return RandomStream(derive_seed(seed, index));
  }

  std::uint64_t next_u64() noexcept {
    counter_ += kGamma;
    std::uint64_t z = counter_;
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  /// Uniform double in [0, 1) with 53-bit resolution. Never returns 1.0,
  /// so `draw < p` is exact at both p = 0 and p = 1.
  double next_unit() noexcept { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, bound); bound must be > 0.
  std::uint32_t next_below(std::uint32_t bound) noexcept {
    // Lemire's multiply-shift rejection method.
    std::uint64_t x = next_u64() >> 32;
    std::uint64_t m = x * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      std::uint32_t threshold = (0u - bound) % bound;
      while (low < threshold) {
        x = next_u64() >> 32;
        m = x * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  std::uint64_t counter_;
};

}  // namespace spreadlab
