#pragma once

#include <cstdint>
#include <random>

namespace abl {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent generator for item `index` of a run seeded with `seed`, so
// results do not depend on the order in which items are processed.
inline std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x5851F42D4C957F2Dull)));
}

// Fair coin from the raw engine output (portable across standard libraries).
inline bool coin(std::mt19937_64& rng) { return (rng() >> 63) != 0; }

}  // namespace abl
