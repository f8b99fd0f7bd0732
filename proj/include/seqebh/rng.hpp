#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace seqebh {

/// Every stream is driven by mt19937_64; per-trial and per-purpose seeds are
/// derived from the single top-level seed with SplitMix64.
using Rng = std::mt19937_64;

inline constexpr std::string_view kGeneratorName = "mt19937_64 (splitmix64-derived seeds)";

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(splitmix64(root) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace seqebh
