#pragma once

#include <array>
#include <cstdint>

namespace vgrasp {

/// One SplitMix64 step: advances `state` and returns the mixed output.
constexpr std::uint64_t splitmix64(std::uint64_t& state)
{
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// xoshiro256** (Blackman & Vigna). The 256-bit state is filled from the
/// 64-bit seed by four SplitMix64 draws. Reference vectors live in docs/rng.md.
class Xoshiro256
{
public:
  explicit constexpr Xoshiro256(std::uint64_t seed)
  {
    std::uint64_t sm = seed;
    for (auto& word : s_)
      word = splitmix64(sm);
  }

  constexpr std::uint64_t next()
  {
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

  // Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Independent stream for trial `index` of a run seeded with `seed`.
  static constexpr Xoshiro256 substream(std::uint64_t seed, std::uint64_t index)
  {
    std::uint64_t h = index;
    return Xoshiro256(seed ^ splitmix64(h));
  }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace vgrasp
