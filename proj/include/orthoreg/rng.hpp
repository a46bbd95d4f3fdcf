#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace orthoreg {

// SplitMix64 step; used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Mixes (seed, a, b) into a fresh 64-bit seed for nested substreams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = seed;
  s ^= splitmix64(a) + 0x9e3779b97f4a7c15ULL;
  s ^= splitmix64(b) + (s << 6) + (s >> 2);
  return splitmix64(s);
}

/// Deterministic substream generator: (seed, name, index) -> independent engine.
/// Results never depend on thread scheduling because every task derives its own
/// engine from its logical index.
inline std::mt19937_64 substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0) {
  std::uint64_t s = seed ^ fnv1a(name);
  s ^= 0x632be59bd9b4e019ULL * (index + 1);
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace orthoreg
