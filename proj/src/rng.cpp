#include "specmult/rng.hpp"

#include <cmath>
#include <numbers>

namespace specmult {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kRealizationSalt = 0xd1b54a32d192ed03ULL;
constexpr std::uint64_t kBlockSalt = 0x8cb92ba72f3d8dd7ULL;
}  // namespace

CounterStream::CounterStream(std::uint64_t master_seed,
                             std::uint64_t realization, std::uint64_t block)
    : key_(mix64(mix64(mix64(master_seed + kGolden) ^
                       (realization + 1) * kRealizationSalt) ^
                 (block + 1) * kBlockSalt)) {}

std::uint64_t CounterStream::next_u64() {
  return mix64(key_ + (++counter_) * kGolden);
}

double CounterStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterStream::next_open_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::next_gaussian() {
  // Box-Muller, cosine branch only: one normal per two draws keeps the
  // draw count per value fixed.
  const double u1 = next_open_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace specmult
