#ifndef GCV_RNG_HPP
#define GCV_RNG_HPP

#include <cstdint>
#include <random>

namespace gcv {

using Rng = std::mt19937_64;

// splitmix64 finalizer; decorrelates sequential seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seed for a derived stream; every (seed, path...) pair maps to an
/// independent-looking stream so parallel tasks stay schedule-independent.
inline std::uint64_t seed_path(std::uint64_t seed) { return mix64(seed); }

template <typename... Rest>
std::uint64_t seed_path(std::uint64_t seed, std::uint64_t head, Rest... rest) {
  return seed_path(mix64(seed ^ mix64(head)), rest...);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

template <typename... Path>
Rng derive_rng(std::uint64_t seed, Path... path) {
  return Rng(seed_path(seed, static_cast<std::uint64_t>(path)...));
}

}  // namespace gcv

#endif  // GCV_RNG_HPP
