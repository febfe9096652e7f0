#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace iotmac {

using Rng = std::mt19937_64;

// SplitMix64 step, used to derive independent sub-seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fixed splitting rule: fold each stream coordinate into the master seed.
// Every run derives its RNGs through this, so a (config, seed) pair pins
// every random draw of an experiment.
inline std::uint64_t mix_seed(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> stream) {
  std::uint64_t h = splitmix64(seed);
  for (auto v : stream) h = splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL));
  return h;
}

}  // namespace iotmac
