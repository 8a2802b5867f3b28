#pragma once

#include <cstdint>
#include <random>

namespace qxai {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Counter-style stream derivation: results depend only on (seed, counters),
/// never on call order, so parallel schedules cannot change output.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ 0x5bf03635aca2f2dcull) ^
                                    splitmix64(a * 0x9e3779b97f4a7c15ull + b)));
}

}  // namespace qxai
