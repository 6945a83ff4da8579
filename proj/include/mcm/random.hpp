#pragma once

#include <array>
#include <cstdint>

namespace mcm {

/// SplitMix64 (Steele, Lea, Flood 2014). Used only to expand seeds.
struct SplitMix64 {
  std::uint64_t state;

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

/// Mixes (seed, stream) into one well-distributed 64-bit key.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  SplitMix64 sm{seed ^ (stream * 0xD1B54A32D192ED03ULL)};
  sm.next();
  return sm.next();
}

/// xoshiro256** 1.0 (Blackman, Vigna). Output is identical on every platform.
///
/// Stream splitting: the generator for (seed, stream) is initialised from four
/// consecutive SplitMix64 outputs started at mix_seed(seed, stream). Monte Carlo
/// sample k uses stream k, so work can be split across threads in any way
/// without changing the draws.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed, std::uint64_t stream = 0) noexcept {
    SplitMix64 sm{mix_seed(seed, stream)};
    for (auto& word : s_) word = sm.next();
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

/// Standard normal by the Marsaglia polar method.
double standard_normal(Xoshiro256& rng) noexcept;

/// Gamma(shape, 1) by Marsaglia and Tsang (2000); shapes below one use the
/// Gamma(shape + 1) * U^(1/shape) boost. Unit shape takes the exponential path.
double gamma_variate(Xoshiro256& rng, double shape) noexcept;

}  // namespace mcm
