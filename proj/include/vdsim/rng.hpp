#pragma once

#include <cstdint>
#include <random>

namespace vdsim {

using Rng = std::mt19937_64;

// Independent purposes within one simulated case draw from separate streams,
// so adding draws to one stage never perturbs another.
enum class Stream : std::uint64_t {
  kCase = 1,
  kDefendant = 2,
  kCause = 3,
  kSelection = 4,
  kVerdict = 5,
  kOracle = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic generator for (master_seed, index, stream). Independent of
// which worker thread evaluates the case.
inline Rng substream(std::uint64_t master_seed, std::uint64_t index,
                     Stream stream = Stream::kCase) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  return Rng(h);
}

}  // namespace vdsim
