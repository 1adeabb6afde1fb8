#pragma once

#include <cstdint>
#include <random>

namespace subrisk {

// All sampling goes through a caller-owned engine; distribution and process
// specs themselves are immutable and freely shareable across threads.
using RandomSource = std::mt19937_64;

inline double uniform01(RandomSource& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// SplitMix64 output function; good avalanche, used for stream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic per-stream seed derived from a master seed and a stream
// index. Replications seeded this way are independent of thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

}  // namespace subrisk
