#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace kappamax {

/// SplitMix64 finalizer, used to turn (seed, stream) pairs into well-mixed
/// engine seeds so that replicate streams are independent of each other.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: order-insensitive across streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t attempt = 0) {
  return splitmix64(splitmix64(base ^ (0x9E3779B97F4A7C15ULL * (stream + 1))) +
                    attempt);
}

/// Unbiased uniform draw from {0, ..., n-1}. Uses rejection sampling and the
/// raw engine output so results do not depend on the standard library's
/// distribution implementations.
inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
  const std::uint64_t span = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x = gen();
  while (x >= limit) x = gen();
  return static_cast<std::size_t>(x % span);
}

/// Uniform draw from [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace kappamax
