#pragma once

#include <cstdint>
#include <random>

namespace berman {

constexpr std::uint64_t kStreamPath = 0x70617468u;  // trajectory values
constexpr std::uint64_t kStreamExp = 0x65787064u;   // exponential draws

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream derivation: the engine for trajectory i depends only
// on (masterSeed, i, purpose), never on worker scheduling.
inline std::mt19937_64 trajectory_engine(std::uint64_t masterSeed,
                                         std::int64_t trajectory,
                                         std::uint64_t purpose) {
  std::uint64_t key = splitmix64(masterSeed);
  key = splitmix64(key ^ (static_cast<std::uint64_t>(trajectory) + 1));
  key = splitmix64(key ^ purpose);
  return std::mt19937_64(key);
}

// Strictly positive unit exponential (ln R for a 1-Pareto R > 1).
inline double unit_exponential(std::mt19937_64& eng) {
  std::exponential_distribution<double> expo(1.0);
  double e = expo(eng);
  while (!(e > 0.0)) e = expo(eng);
  return e;
}

}  // namespace berman
