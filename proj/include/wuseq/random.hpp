#pragma once

#include <cstdint>
#include <random>

namespace wuseq {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent child seeds.
constexpr auto mix_seed(std::uint64_t x) -> std::uint64_t {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for stream `index` of `master`. Results do not depend on the
// order in which streams are consumed.
constexpr auto derive_seed(std::uint64_t master, std::uint64_t index) -> std::uint64_t {
  return mix_seed(mix_seed(master) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

inline auto make_rng(std::uint64_t seed) -> Rng {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

}  // namespace wuseq
