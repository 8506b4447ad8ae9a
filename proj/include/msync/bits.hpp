#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace msync {

/// A binary word, one bit per element (values 0 or 1).
using Bits = std::vector<std::uint8_t>;

inline std::string to_string(std::span<const std::uint8_t> bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline Bits bits_from_string(std::string_view s) {
    Bits out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '0')
            out.push_back(0);
        else if (c == '1')
            out.push_back(1);
        else
            throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
    return out;
}

/// Slice of a word using 1-based inclusive positions [lo, hi].
inline Bits slice(std::span<const std::uint8_t> w, int lo, int hi) {
    if (lo < 1 || hi > static_cast<int>(w.size()) || lo > hi + 1)
        throw std::out_of_range("slice: positions out of range");
    return Bits(w.begin() + (lo - 1), w.begin() + hi);
}

inline Bits zeros(std::size_t n) { return Bits(n, 0); }
inline Bits ones(std::size_t n) { return Bits(n, 1); }

}  // namespace msync
