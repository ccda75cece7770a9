#pragma once

#include <cstdint>
#include <random>

namespace gcrp {

/// 64-bit finalizer from SplitMix64; a bijection with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-replica stream seed. mix64 is bijective and the odd multiplier makes
/// the inner sum injective in replica_id, so distinct ids (fixed base) and
/// distinct bases (fixed id) never collide.
constexpr std::uint64_t derive_replica_seed(std::uint64_t base_seed, std::uint64_t replica_id) {
  return mix64(mix64(base_seed) + 0x9e3779b97f4a7c15ULL * (replica_id + 1));
}

/// Mersenne Twister with a platform-independent mapping to [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// 53 random mantissa bits, uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gcrp
