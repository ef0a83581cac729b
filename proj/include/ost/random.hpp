#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ost {

// std distributions are implementation-defined, so everything that must be
// reproducible across platforms draws through these helpers on top of the
// fully specified mt19937_64 engine.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable seed derivation: mixes a master seed with any number of indices.
template <typename... Ints>
std::uint64_t derive_seed(std::uint64_t master, Ints... indices) {
  std::uint64_t h = splitmix64(master);
  ((h = splitmix64(h ^ static_cast<std::uint64_t>(indices))), ...);
  return h;
}

/// Uniform integer in [0, bound). Rejection sampling, bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Fisher-Yates with uniform_below.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t k = items.size(); k > 1; --k) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, k));
    std::swap(items[k - 1], items[j]);
  }
}

}  // namespace ost
