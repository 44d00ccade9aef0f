#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cbl {

// All randomness flows through std::mt19937_64, whose output sequence is
// fixed by the standard. The helpers below replace std::*_distribution,
// whose draw sequences are implementation-defined, so that seeded runs
// reproduce bit-for-bit across standard libraries.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent per-run seed derived from a master seed and a run index.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 1));
}

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double canonical_double(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return canonical_double(rng) < p; }

// Uniform index in [0, n). n must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  auto i = static_cast<std::size_t>(canonical_double(rng) * static_cast<double>(n));
  return i < n ? i : n - 1;
}

}  // namespace cbl
