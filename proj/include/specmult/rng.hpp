#pragma once

#include <cstdint>

namespace specmult {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream keyed by (master seed, realization, block).
///
/// The n-th draw is a pure function of the key and n, so a block's couplings
/// do not depend on which thread produced them or in what order.
class CounterStream {
 public:
  CounterStream(std::uint64_t master_seed, std::uint64_t realization,
                std::uint64_t block);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform();
  /// Uniform on (0, 1); never returns 0.
  double next_open_uniform();
  double next_gaussian();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace specmult
