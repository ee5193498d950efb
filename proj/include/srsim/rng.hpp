#pragma once

#include <cstdint>

namespace srsim {

// Counter-based substream generator (splitmix64 over a derived start state).
// Draw i of stream (seed, stream_id) is a pure function of (seed, stream_id, i),
// so results do not depend on which worker executes which trial. All arithmetic
// is 64-bit integer; outputs are identical on every platform.
class SubstreamRng {
 public:
  SubstreamRng(std::uint64_t seed, std::uint64_t stream_id)
      : state_(mix64(seed + kGolden) ^ mix64(stream_id + kStreamSalt)) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound >= 1. Unbiased (rejection sampling).
  std::uint32_t next_below(std::uint32_t bound) {
    std::uint32_t x = static_cast<std::uint32_t>(next_u64() >> 32);
    std::uint64_t m = static_cast<std::uint64_t>(x) * bound;
    std::uint32_t low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      const std::uint32_t threshold = (0u - bound) % bound;
      while (low < threshold) {
        x = static_cast<std::uint32_t>(next_u64() >> 32);
        m = static_cast<std::uint64_t>(x) * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  /// Derives a decorrelated seed from a base seed and an index (used to give
  /// each sweep row its own seed).
  static std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
    return mix64(base_seed + kGolden * (index + 1));
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;

  // Stafford mix13 finalizer.
  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace srsim
