#pragma once

#include <cmath>
#include <cstdint>

namespace cutset {

// Counter-based pseudo-random stream. Every (seed, stream) pair yields an
// independent deterministic sequence, so trial-level parallelism cannot
// change results: trial t always consumes stream(seed, t).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix(seed ^ 0x9e3779b97f4a7c15ULL, stream)) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, m)
  std::uint64_t next_below(std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(next_unit() * static_cast<double>(m)) % m;
  }

  // standard normal via Box-Muller (uncached; two uniforms per draw)
  double next_gaussian() noexcept {
    double u1 = next_unit();
    double u2 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace cutset
