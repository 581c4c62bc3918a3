#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fingerhud {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Child seed from a parent seed and a path of small integers.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = seed;
    std::uint64_t out = splitmix64(state);
    for (auto p : path) {
        state = out ^ (p * 0xD1B54A32D192ED03ull + 1);
        out = splitmix64(state);
    }
    return out;
}

using Rng = std::mt19937_64;

}  // namespace fingerhud
