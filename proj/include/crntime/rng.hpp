#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace crntime {

/// SplitMix64 finalizer; used to derive stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** generator. A stream is identified by (seed, stream index);
/// per-trial substreams make results independent of execution order.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept {
    std::uint64_t key = mix64(seed) ^ mix64(stream ^ 0x6a09e667f3bcc909ULL);
    for (auto& word : s_) {
      key = mix64(key);
      word = key;
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

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

  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential variate with the given rate, by inversion. Always finite
  /// and strictly positive for finite positive rates.
  double exponential(double rate) noexcept { return -std::log(uniform_open()) / rate; }

  /// Substream for trial `index` under `seed`.
  static Rng substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return Rng(seed, index);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace crntime
