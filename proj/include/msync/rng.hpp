#pragma once

// Portable, replayable randomness.
//
// std::mt19937_64 is specified bit-exactly by the standard, but the
// std::*_distribution adaptors are not, so every draw used by the library
// goes through the helpers below.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace msync {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master ^ splitmix64(index + 1));
}

/// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniformly random k-subset of {1, ..., n}, returned sorted (Floyd's algorithm).
inline std::vector<int> sample_subset(Rng& rng, int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("sample_subset: k out of range");
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    for (int j = n - k + 1; j <= n; ++j) {
        const int r = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(j)));
        if (std::find(chosen.begin(), chosen.end(), r) == chosen.end())
            chosen.push_back(r);
        else
            chosen.push_back(j);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace msync
