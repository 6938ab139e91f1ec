#pragma once

#include <cmath>
#include <cstdint>

namespace banditlink {

// All randomness in the library is derived from 64-bit keys through the
// splitmix64 finalizer. Draws are position-addressable: the value of the
// j-th draw of a named stream is a pure function of (seed, stream id, j),
// never of consumption order. Runs sharing a seed are couplable because of
// this; several identity checks rely on it.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive combiner for deriving child seeds: combine(a, b) and
// combine(b, a) differ, and chains extend left to right.
constexpr std::uint64_t seed_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ (mix64(b) + kGolden + (a << 6) + (a >> 2)));
}

// Uniform in [0, 1) from the top 53 bits.
constexpr double unit_from_bits(std::uint64_t u) noexcept {
  return static_cast<double>(u >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1]; safe under log().
constexpr double positive_unit_from_bits(std::uint64_t u) noexcept {
  return static_cast<double>((u >> 11) + 1) * 0x1.0p-53;
}

// Standard normal from one 64-bit key (Box-Muller, cosine branch). Kept
// hand-rolled so draws stay bit-reproducible across standard libraries.
inline double gaussian_from_key(std::uint64_t key) noexcept {
  const double u1 = positive_unit_from_bits(mix64(key ^ 0x8f1bbcdcbfa53e0bULL));
  const double u2 = unit_from_bits(mix64(key ^ 0x2545f4914f6cdd1dULL));
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Sequential uniform stream (splitmix64). The channel sampler consumes
// exactly one next_unit() per use.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += kGolden);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next_unit() noexcept { return unit_from_bits(next_u64()); }

 private:
  std::uint64_t state_;
};

}  // namespace banditlink
