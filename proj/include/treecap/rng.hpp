#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace treecap {

// SplitMix64 finalizer. All seed derivation goes through this so that
// nearby seeds and stream indices produce unrelated engine states.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(seed, a), b);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

/// Independent substream for instance `stream` of a master seed; substreams
/// are what make Monte Carlo aggregation order-independent.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(seed, stream));
}

/// Uniform double in [0,1) from the top 53 bits; avoids the
/// implementation-defined behavior of std::uniform_real_distribution so
/// streams are reproducible across standard libraries.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t n) {
  // Rejection sampling on the top bits keeps the draw exactly uniform.
  std::uint64_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    std::uint64_t v = eng() & mask;
    if (v < n) return v;
  }
}

}  // namespace treecap
