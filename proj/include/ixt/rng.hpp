#pragma once

#include <array>
#include <cstdint>

namespace ixt {

inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  return mix64(state);
}

// xoshiro256++ stream whose state is derived from (seed, key triple) via
// splitmix64. Replicate i of a Monte Carlo run gets keyed(seed, tag, job, i),
// so the draw sequence depends only on the key, never on thread scheduling.
class RngStream {
 public:
  static RngStream keyed(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                         std::uint64_t c = 0) noexcept {
    std::uint64_t st = seed;
    st = mix64(st + 0x9e3779b97f4a7c15ULL * (a + 1));
    st = mix64(st + 0x9e3779b97f4a7c15ULL * (b + 1));
    st = mix64(st + 0x9e3779b97f4a7c15ULL * (c + 1));
    RngStream r;
    for (auto& w : r.s_) w = splitmix64(st);
    if ((r.s_[0] | r.s_[1] | r.s_[2] | r.s_[3]) == 0) r.s_[0] = 1;
    return r;
  }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // 53-bit uniform in [0, 1)
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in {0, ..., n-1}; multiply-shift, bias ~2^-64
  std::uint32_t below(std::uint32_t n) noexcept {
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

// Key tags separating the RNG domains of the sampling operations.
namespace rng_tag {
inline constexpr std::uint64_t tau_i = 1;
inline constexpr std::uint64_t ti_screen = 2;
inline constexpr std::uint64_t ti_final = 3;
inline constexpr std::uint64_t count_i = 4;
inline constexpr std::uint64_t s_t = 5;
inline constexpr std::uint64_t family = 6;
inline constexpr std::uint64_t instance = 7;
}  // namespace rng_tag

}  // namespace ixt
