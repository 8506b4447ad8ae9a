#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance binary.

#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "msync/quantum_sim.hpp"
#include "msync/rng.hpp"
#include "msync/rs_code.hpp"

namespace oracle {

using namespace msync;

inline int hamming(const SymbolWord& a, const SymbolWord& b, const std::vector<char>& skip) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!skip[i] && a[i] != b[i]) ++d;
    return d;
}

// Every codeword agreeing with the received word on some K unerased
// positions, found by Lagrange interpolation through those positions.
inline std::set<SymbolWord> interpolation_candidates(const RSCode& code, const ReceivedSymbolWord& r) {
    const auto& f = code.field();
    const int K = code.dimension(), N = code.length();
    std::vector<int> kept;
    for (int i = 0; i < N; ++i)
        if (r.symbols[static_cast<std::size_t>(i)]) kept.push_back(i);
    std::set<SymbolWord> out;
    if (static_cast<int>(kept.size()) < K) return out;
    std::vector<int> pick(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) pick[static_cast<std::size_t>(i)] = i;
    const auto& x = code.eval_points();
    const auto& v = code.multipliers();
    while (true) {
        SymbolWord cw(static_cast<std::size_t>(N), 0);
        for (int pos = 0; pos < N; ++pos) {
            Symbol acc = 0;
            for (int a = 0; a < K; ++a) {
                const int ia = kept[static_cast<std::size_t>(pick[static_cast<std::size_t>(a)])];
                Symbol term = f.div(*r.symbols[static_cast<std::size_t>(ia)], v[static_cast<std::size_t>(ia)]);
                for (int b = 0; b < K; ++b) {
                    if (b == a) continue;
                    const int ib = kept[static_cast<std::size_t>(pick[static_cast<std::size_t>(b)])];
                    term = f.mul(term, f.div(f.add(x[static_cast<std::size_t>(pos)], x[static_cast<std::size_t>(ib)]),
                                             f.add(x[static_cast<std::size_t>(ia)], x[static_cast<std::size_t>(ib)])));
                }
                acc ^= term;
            }
            cw[static_cast<std::size_t>(pos)] = f.mul(acc, v[static_cast<std::size_t>(pos)]);
        }
        out.insert(cw);
        int i = K - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == static_cast<int>(kept.size()) - K + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < K; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

// Nearest codeword on the unerased positions, if unique and within the
// guaranteed radius floor((N - e - K) / 2).
inline std::optional<SymbolWord> oracle_decode(const RSCode& code, const ReceivedSymbolWord& r) {
    std::vector<char> skip(r.symbols.size());
    SymbolWord flat(r.symbols.size(), 0);
    int erased = 0;
    for (std::size_t i = 0; i < r.symbols.size(); ++i) {
        skip[i] = !r.symbols[i];
        erased += skip[i];
        if (r.symbols[i]) flat[i] = *r.symbols[i];
    }
    const int radius = (code.length() - erased - code.dimension()) / 2;
    if (radius < 0) return std::nullopt;
    std::optional<SymbolWord> best;
    int best_d = 1 << 30, ties = 0;
    for (const auto& c : interpolation_candidates(code, r)) {
        const int d = hamming(c, flat, skip);
        if (d < best_d) {
            best_d = d;
            best = c;
            ties = 1;
        } else if (d == best_d) {
            ++ties;
        }
    }
    if (!best || best_d > radius || ties != 1) return std::nullopt;
    return best;
}

inline std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (__builtin_popcount(m) == k) {
            std::vector<int> s;
            for (int i = 0; i < n; ++i)
                if (m >> i & 1u) s.push_back(i);
            out.push_back(s);
        }
    return out;
}

// Product state built as the Kronecker product of single-qubit matrices,
// with qubit 1 as the least significant bit of the index.
inline SparseDensityOperator product_state(const std::vector<QubitState>& qs) {
    const int n = static_cast<int>(qs.size());
    SparseDensityOperator rho(n);
    const BasisString dim = BasisString{1} << n;
    for (BasisString x = 0; x < dim; ++x)
        for (BasisString y = 0; y < dim; ++y) {
            Complex v = 1.0;
            for (int i = 0; i < n; ++i) v *= qs[static_cast<std::size_t>(i)]((x >> i) & 1u, (y >> i) & 1u);
            if (std::abs(v) > 0) rho.add(x, y, v);
        }
    rho.canonicalize();
    return rho;
}

inline QubitState random_pure(Rng& rng) {
    const double th = uniform_unit(rng) * M_PI, ph = uniform_unit(rng) * 2 * M_PI;
    return QubitState::pure(std::cos(th / 2), std::polar(std::sin(th / 2), ph));
}

}  // namespace oracle
