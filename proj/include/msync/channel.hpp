#pragma once

// Classical deletion / insertion channels.
//
// Positions are 1-based. Deletion positions index the transmitted word;
// insertion positions index the received word, so that deleting K from the
// output gives back the input.

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bits.hpp"
#include "rng.hpp"

namespace msync {

struct ErrorPattern {
    std::vector<int> deletions;   // J, sorted, positions in the pre-channel word
    std::vector<int> insertions;  // K, sorted, positions in the post-channel word
    Bits payload;                 // one bit per element of K

    int num_deletions() const noexcept { return static_cast<int>(deletions.size()); }
    int num_insertions() const noexcept { return static_cast<int>(insertions.size()); }
    bool empty() const noexcept { return deletions.empty() && insertions.empty(); }

    friend bool operator==(const ErrorPattern&, const ErrorPattern&) = default;
};

namespace detail {

inline void require_positions(std::span<const int> pos, int n, const char* what) {
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (pos[i] < 1 || pos[i] > n) throw std::out_of_range(std::string(what) + ": position out of range");
        if (i > 0 && pos[i] <= pos[i - 1])
            throw std::invalid_argument(std::string(what) + ": positions must be strictly increasing");
    }
}

}  // namespace detail

/// D_J(x): x with the positions in J removed.
inline Bits apply_deletions(std::span<const std::uint8_t> x, std::span<const int> J) {
    detail::require_positions(J, static_cast<int>(x.size()), "apply_deletions");
    Bits out;
    out.reserve(x.size() - J.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (next < J.size() && J[next] == static_cast<int>(i) + 1) {
            ++next;
            continue;
        }
        out.push_back(x[i]);
    }
    return out;
}

/// The member of I_K(x) whose bits at K equal `payload`.
inline Bits apply_insertions(std::span<const std::uint8_t> x, std::span<const int> K,
                             std::span<const std::uint8_t> payload) {
    if (K.size() != payload.size()) throw std::invalid_argument("apply_insertions: payload size != |K|");
    const int n = static_cast<int>(x.size() + K.size());
    detail::require_positions(K, n, "apply_insertions");
    Bits out;
    out.reserve(static_cast<std::size_t>(n));
    std::size_t next = 0, src = 0;
    for (int pos = 1; pos <= n; ++pos) {
        if (next < K.size() && K[next] == pos) {
            out.push_back(payload[next] ? 1 : 0);
            ++next;
        } else {
            out.push_back(x[src++]);
        }
    }
    return out;
}

/// y = I_K(D_J(x)) with the pattern's payload.
inline Bits transmit(std::span<const std::uint8_t> x, const ErrorPattern& p) {
    return apply_insertions(apply_deletions(x, p.deletions), p.insertions, p.payload);
}

/// Uniform J over t_d-subsets of [length], uniform K over t_i-subsets of
/// [length - t_d + t_i], uniform payload. Deterministic in `seed`.
inline ErrorPattern sample_composite(std::uint64_t seed, int length, int t_d, int t_i) {
    if (t_d < 0 || t_i < 0 || t_d > length) throw std::invalid_argument("sample_composite: bad error counts");
    Rng rng(seed);
    ErrorPattern p;
    p.deletions = sample_subset(rng, length, t_d);
    p.insertions = sample_subset(rng, length - t_d + t_i, t_i);
    p.payload.resize(static_cast<std::size_t>(t_i));
    for (auto& b : p.payload) b = static_cast<std::uint8_t>(uniform_below(rng, 2));
    return p;
}

/// Calls fn(pattern) for every pattern with exactly t_d deletions and t_i
/// insertions on a word of the given length, every payload included.
template <typename Fn>
void for_each_pattern(int length, int t_d, int t_i, Fn&& fn) {
    auto next_subset = [](std::vector<int>& s, int n) {
        int k = static_cast<int>(s.size());
        int i = k - 1;
        while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
        if (i < 0) return false;
        ++s[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
        return true;
    };
    const int out_len = length - t_d + t_i;
    if (t_d > length || out_len < t_i) return;
    ErrorPattern p;
    p.deletions.resize(static_cast<std::size_t>(t_d));
    for (int i = 0; i < t_d; ++i) p.deletions[static_cast<std::size_t>(i)] = i + 1;
    do {
        p.insertions.resize(static_cast<std::size_t>(t_i));
        for (int i = 0; i < t_i; ++i) p.insertions[static_cast<std::size_t>(i)] = i + 1;
        do {
            p.payload.assign(static_cast<std::size_t>(t_i), 0);
            for (std::uint32_t bits = 0; bits < (1u << t_i); ++bits) {
                for (int i = 0; i < t_i; ++i) p.payload[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
                fn(static_cast<const ErrorPattern&>(p));
            }
        } while (next_subset(p.insertions, out_len));
    } while (next_subset(p.deletions, length));
}

}  // namespace msync
