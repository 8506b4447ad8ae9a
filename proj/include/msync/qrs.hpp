#pragma once

// Quantum RS codes (CSS codes of B(C1) over B(C2)), their marker-interleaved
// physical states, the measurement-driven marker scan, and syndrome-based
// recovery from block erasures and block errors.
//
// Logical qubit (b-1)E + k (1-based k) carries coordinate a_k of block b.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf2e.hpp"
#include "hagiwara.hpp"
#include "quantum_sim.hpp"
#include "rng.hpp"
#include "rs_code.hpp"

namespace msync {

/// Binary image of a field word as an NE-bit basis string.
inline BasisString pack_word(std::span<const Symbol> word, const BasisExpansion& ex) {
    const int E = ex.width();
    if (static_cast<int>(word.size()) * E > kMaxQubits) throw std::length_error("pack_word: word wider than 64 bits");
    BasisString x = 0;
    for (std::size_t i = 0; i < word.size(); ++i)
        x |= static_cast<BasisString>(ex.packed(word[i])) << (static_cast<int>(i) * E);
    return x;
}

/// Field word whose binary image is x.
inline SymbolWord unpack_word(BasisString x, int N, const BasisExpansion& ex) {
    const int E = ex.width();
    SymbolWord out(static_cast<std::size_t>(N));
    Bits blk(static_cast<std::size_t>(E));
    for (int i = 0; i < N; ++i) {
        for (int k = 0; k < E; ++k) blk[static_cast<std::size_t>(k)] = (x >> (i * E + k)) & 1u;
        out[static_cast<std::size_t>(i)] = ex.contract(blk);
    }
    return out;
}

struct QRSCodeword {
    CodeParams params;
    std::vector<std::vector<BasisString>> cosets;  // X^(i), each sorted
    std::vector<Complex> alphas;                   // logical amplitudes, normalized
    PureState state;                               // on NE qubits

    std::size_t num_cosets() const noexcept { return cosets.size(); }
};

/// Number of logical basis states q^(K1 - K2).
inline std::uint64_t logical_dimension(const RSCode& C1, const RSCode& C2) {
    std::uint64_t k = 1;
    for (int i = 0; i < C1.dimension() - C2.dimension(); ++i) {
        k *= C1.field().size();
        if (k > (1u << 20)) throw std::length_error("logical_dimension: too many cosets");
    }
    return k;
}

/// |psi> = sum_i alpha_i |psi^(i)>, |psi^(i)> uniform over the coset
/// enc1(m_i) + B(C2), where m_i has zero coefficients below degree K2 and
/// the base-q digits of i above.
inline QRSCodeword build_qrs(const CodeParams& params, const RSCode& C1, const RSCode& C2, const BasisExpansion& ex,
                             std::vector<Complex> alphas) {
    if (!(C1.field() == ex.field()) || !(C2.field() == ex.field()))
        throw std::invalid_argument("build_qrs: codes and basis use different fields");
    if (!ex.basis().self_dual) throw std::invalid_argument("build_qrs: basis must be self-dual");
    if (C1.length() != params.N || C2.length() != params.N || ex.width() != params.E)
        throw std::invalid_argument("build_qrs: code length or field degree disagrees with params");
    if (!is_subcode(C2, C1)) throw std::invalid_argument("build_qrs: C2 is not contained in C1");

    const std::uint64_t k = logical_dimension(C1, C2);
    if (alphas.size() != k) throw std::invalid_argument("build_qrs: need one amplitude per coset");
    double norm2 = 0.0;
    for (auto a : alphas) norm2 += std::norm(a);
    if (!(norm2 > 0.0)) throw std::invalid_argument("build_qrs: zero logical vector");
    for (auto& a : alphas) a /= std::sqrt(norm2);

    std::vector<BasisString> inner;
    for (const auto& c : enumerate_codewords(C2)) inner.push_back(pack_word(c, ex));

    const std::uint64_t q = C1.field().size();
    const int K1 = C1.dimension(), K2 = C2.dimension();
    QRSCodeword out{params, {}, alphas, {}};
    std::set<BasisString> seen;
    PureState::AmplitudeMap amps;
    for (std::uint64_t i = 0; i < k; ++i) {
        SymbolWord msg(static_cast<std::size_t>(K1), 0);
        std::uint64_t v = i;
        for (int j = K2; j < K1; ++j) {
            msg[static_cast<std::size_t>(j)] = static_cast<Symbol>(v % q);
            v /= q;
        }
        const BasisString rep = pack_word(C1.encode(msg), ex);
        std::vector<BasisString> coset;
        for (auto g : inner) {
            const BasisString x = rep ^ g;
            if (!seen.insert(x).second) throw std::invalid_argument("build_qrs: coset representatives are not distinct");
            coset.push_back(x);
        }
        std::sort(coset.begin(), coset.end());
        const Complex amp = alphas[i] / std::sqrt(static_cast<double>(coset.size()));
        if (alphas[i] != Complex{})
            for (auto x : coset) amps[x] += amp;
        out.cosets.push_back(std::move(coset));
    }
    out.state = PureState(params.logical_qubits(), std::move(amps));
    return out;
}

/// Physical basis string: block b of x followed by 0^t 1^t, for every b.
inline BasisString interleave_markers(BasisString x, const CodeParams& p) {
    BasisString y = 0;
    for (int b = 1; b <= p.N; ++b) {
        const int base = p.block_start(b);
        for (int k = 0; k < p.E; ++k)
            if ((x >> ((b - 1) * p.E + k)) & 1u) y |= BasisString{1} << (base + k);
        for (int k = 0; k < p.t; ++k) y |= BasisString{1} << (base + p.E + p.t + k);
    }
    return y;
}

inline PureState encode_hagiwara_pure(const QRSCodeword& cw, int t) {
    CodeParams p = cw.params;
    p.t = t;
    p.validate_layout();
    if (p.codeword_length() > kMaxQubits) throw std::length_error("encode_hagiwara_quantum: more than 64 qubits");
    PureState::AmplitudeMap amps;
    for (const auto& [x, a] : cw.state.amplitudes()) amps[interleave_markers(x, p)] = a;
    return PureState(p.codeword_length(), std::move(amps));
}

inline SparseDensityOperator encode_hagiwara_quantum(const QRSCodeword& cw, int t) {
    return encode_hagiwara_pure(cw, t).density();
}

struct MeasurementRecord {
    std::vector<Bits> outcomes;               // r_b, tau_d + tau_i bits each
    std::vector<double> probabilities;        // probability of r_b given r_1..r_{b-1}
    std::vector<std::vector<int>> kept;       // designated qubits of block b; empty if erased
    std::vector<bool> erased;
    SparseDensityOperator collapsed;          // sigma after every marker measurement
};

struct QuantumScanResult {
    ShiftBudget budget;
    SparseDensityOperator state;  // NE qubits
    std::vector<int> erased;      // P, 1-based
    std::vector<BranchStep> trace;
    MeasurementRecord record;
};

/// The marker scan with y_b replaced by measured marker qubits. Kept blocks
/// are gathered in order, all other qubits are traced out, and erased blocks
/// are refilled with |0>^E.
inline QuantumScanResult quantum_algorithm1(const SparseDensityOperator& sigma, const CodeParams& p, Rng& rng) {
    p.validate_layout();
    const int n = sigma.num_qubits();
    QuantumScanResult res;
    res.budget = shift_budget(p, n);
    const auto& s = res.budget;
    if (s.tau_d < 0 || s.tau_i < 0)
        throw std::invalid_argument("quantum_algorithm1: qubit count differs from N(E+2t) by more than t");
    if (p.logical_qubits() > kMaxQubits) throw std::length_error("quantum_algorithm1: more than 64 logical qubits");

    SparseDensityOperator cur = sigma;
    int u = 0, v = 0;
    for (int b = 1; b <= p.N; ++b) {
        const int l = -u + v;
        const auto g = BlockGeometry::of(p, s, b);
        if (g.window_lo < 1 || g.window_hi > n)
            throw std::invalid_argument("quantum_algorithm1: marker window of block " + std::to_string(b) + " out of range");
        Bits r;
        double prob = 1.0;
        for (int q = g.window_lo; q <= g.window_hi; ++q) {
            auto m = measure_qubit(cur, q, uniform_unit(rng));
            r.push_back(static_cast<std::uint8_t>(m.outcome));
            prob *= m.probability;
            cur = std::move(m.state);
        }
        const auto d = decide_branch(r, l, s);
        BranchStep step{b, d.branch, d.w, l, u, v, r};
        std::vector<int> kept;
        switch (d.branch) {
            case Branch::copy: {
                const int lo = g.beta + l + 1, hi = g.beta + l + p.E;
                if (lo < 1 || hi > n)
                    throw std::invalid_argument("quantum_algorithm1: block " + std::to_string(b) + " out of range");
                for (int q = lo; q <= hi; ++q) kept.push_back(q);
                break;
            }
            case Branch::deletion:
                res.erased.push_back(b);
                u += d.w;
                break;
            case Branch::insertion:
                res.erased.push_back(b);
                v += 1;
                break;
        }
        step.u = u;
        step.v = v;
        res.trace.push_back(std::move(step));
        res.record.outcomes.push_back(std::move(r));
        res.record.probabilities.push_back(prob);
        res.record.erased.push_back(d.branch != Branch::copy);
        res.record.kept.push_back(std::move(kept));
    }

    BasisString designated = 0;
    for (const auto& blk : res.record.kept)
        for (int q : blk) designated |= BasisString{1} << (q - 1);
    const BasisString discard = qbits::mask(n) & ~designated;

    SparseDensityOperator out(p.logical_qubits());
    for (const auto& [k, val] : cur.entries()) {
        if (((k.x ^ k.y) & discard) != 0) continue;
        BasisString x = 0, y = 0;
        for (int b = 1; b <= p.N; ++b) {
            const auto& blk = res.record.kept[static_cast<std::size_t>(b - 1)];
            for (std::size_t j = 0; j < blk.size(); ++j) {
                const int dst = (b - 1) * p.E + static_cast<int>(j);
                x |= static_cast<BasisString>(qbits::get(k.x, blk[j])) << dst;
                y |= static_cast<BasisString>(qbits::get(k.y, blk[j])) << dst;
            }
        }
        out.add(x, y, val);
    }
    out.canonicalize();
    res.record.collapsed = std::move(cur);
    res.state = std::move(out);
    return res;
}

struct RecoveryResult {
    SparseDensityOperator state;
    bool ok = true;
    std::string detail;
    double x_unresolved = 0.0;  // weight of bit-flip syndromes the C1 decoder rejected
    double z_unresolved = 0.0;  // weight of phase-flip syndromes the dual-C2 decoder rejected
};

namespace detail {

/// Rows B(b_k * m_j) of the binary image of a field matrix, one per (j, k).
inline std::vector<BasisString> binary_rows(const Matrix& m, const BasisExpansion& ex) {
    const auto& f = ex.field();
    std::vector<BasisString> rows;
    for (const auto& row : m)
        for (auto bk : ex.basis().elements) {
            SymbolWord scaled(row.size());
            for (std::size_t i = 0; i < row.size(); ++i) scaled[i] = f.mul(bk, row[i]);
            rows.push_back(pack_word(scaled, ex));
        }
    return rows;
}

/// Field syndrome read off binary checks: bits (j, 1..E) contract to S_j.
inline SymbolWord contracted_syndrome(BasisString x, const std::vector<BasisString>& rows, const BasisExpansion& ex) {
    const int E = ex.width();
    SymbolWord s;
    Bits bits(static_cast<std::size_t>(E));
    for (std::size_t r = 0; r < rows.size(); r += static_cast<std::size_t>(E)) {
        for (int k = 0; k < E; ++k) bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(qbits::parity(x & rows[r + static_cast<std::size_t>(k)]));
        s.push_back(ex.contract(bits));
    }
    return s;
}

/// Canonical coset representatives modulo a GF(2) span of 64-bit words.
class GF2Span {
public:
    explicit GF2Span(std::span<const BasisString> words) {
        for (auto w : words) {
            w = reduce(w);
            if (!w) continue;
            const BasisString lead = BasisString{1} << (63 - __builtin_clzll(w));
            for (auto& [p, b] : basis_)
                if (b & lead) b ^= w;
            basis_.emplace_back(lead, w);
        }
    }

    /// The unique member of w + span with every pivot bit cleared.
    BasisString reduce(BasisString w) const {
        for (const auto& [p, b] : basis_)
            if (w & p) w ^= b;
        return w;
    }

    int dimension() const noexcept { return static_cast<int>(basis_.size()); }

private:
    std::vector<std::pair<BasisString, BasisString>> basis_;  // (pivot bit, reduced vector)
};

/// A binary word with field syndrome S under `checks` that is closest to
/// the code; ok = false when the error-and-erasure decoder gave up.
struct Correction {
    BasisString mask = 0;
    bool ok = true;
};

inline Correction correction_for(const SymbolWord& S, const Matrix& checks, const RSCode& code,
                                 const std::vector<int>& erased0, const BasisExpansion& ex) {
    const auto r = linalg::solve(ex.field(), checks, S);
    if (!r) throw std::logic_error("css_recover: syndrome outside the column space of the checks");
    const auto dec = decode_errors_erasures(code, ReceivedSymbolWord::from(*r, erased0));
    if (!dec.ok()) return {pack_word(*r, ex), false};
    SymbolWord e(r->size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = (*r)[i] ^ dec.codeword[i];
    return {pack_word(e, ex), true};
}

}  // namespace detail

/// Syndrome recovery for the CSS code of B(C1) over B(C2) with known
/// erased blocks P (1-based).
///
/// Bit flips: the Z-type checks B(b_k h_j) of B(C1) are measured, the field
/// syndrome is decoded in C1 with erasures P, and the flip is undone.
/// Phase flips: the X-type checks B(b_k g_j) from the generator of C2 are
/// measured and decoded in the dual of C2. Both measure-and-correct steps are
/// applied as channels summed over all outcomes, so the result is
/// deterministic.
inline RecoveryResult css_recover(const SparseDensityOperator& state, const std::vector<int>& P, const RSCode& C1,
                                  const RSCode& C2, const BasisExpansion& ex, double flag_threshold = 1e-12) {
    const int N = C1.length(), E = ex.width();
    if (state.num_qubits() != N * E) throw std::invalid_argument("css_recover: state must have N*E qubits");
    if (!ex.basis().self_dual) throw std::invalid_argument("css_recover: basis must be self-dual");
    if (!is_subcode(C2, C1)) throw std::invalid_argument("css_recover: C2 is not contained in C1");
    if (C2.dimension() == N) throw std::invalid_argument("css_recover: C2 must be a proper subcode of the full space");
    std::vector<int> erased0;
    for (int b : P) {
        if (b < 1 || b > N) throw std::out_of_range("css_recover: erased block out of range");
        erased0.push_back(b - 1);
    }

    RecoveryResult res;
    SparseDensityOperator cur = state;

    if (C1.dimension() < N) {
        const Matrix H = C1.parity_check_matrix();
        const auto rows = detail::binary_rows(H, ex);
        std::map<SymbolWord, detail::Correction> fix;
        std::map<SymbolWord, double> weight;
        std::unordered_map<BasisString, SymbolWord> syn;
        auto syndrome_of = [&](BasisString x) -> const SymbolWord& {
            auto it = syn.find(x);
            if (it == syn.end()) it = syn.emplace(x, detail::contracted_syndrome(x, rows, ex)).first;
            return it->second;
        };
        for (const auto& [k, v] : cur.entries())
            if (k.x == k.y) weight[syndrome_of(k.x)] += v.real();
        for (const auto& [S, w] : weight) {
            fix[S] = detail::correction_for(S, H, C1, erased0, ex);
            if (!fix[S].ok) res.x_unresolved += w;
        }
        SparseDensityOperator next(N * E);
        for (const auto& [k, v] : cur.entries()) {
            const auto& Sx = syndrome_of(k.x);
            if (Sx != syndrome_of(k.y)) continue;
            auto it = fix.find(Sx);
            const BasisString e = it != fix.end() ? it->second.mask
                                                  : detail::correction_for(Sx, H, C1, erased0, ex).mask;
            next.add(k.x ^ e, k.y ^ e, v);
        }
        next.canonicalize();
        cur = std::move(next);
    }

    {
        const Matrix G = C2.generator_matrix();
        const RSCode D = dual_code(C2);
        const auto rows = detail::binary_rows(G, ex);
        std::vector<BasisString> group;
        for (const auto& c : enumerate_codewords(C2)) group.push_back(pack_word(c, ex));
        const double inv_g = 1.0 / static_cast<double>(group.size());

        // One phase-flip representative f_s per binary syndrome s.
        const int nbits = static_cast<int>(rows.size());
        std::vector<BasisString> flips;
        std::vector<char> flip_ok;
        Bits sbits(static_cast<std::size_t>(E));
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << nbits); ++s) {
            SymbolWord T;
            for (int j = 0; j < nbits; j += E) {
                for (int k = 0; k < E; ++k) sbits[static_cast<std::size_t>(k)] = (s >> (j + k)) & 1u;
                T.push_back(ex.contract(sbits));
            }
            const auto c = detail::correction_for(T, G, D, erased0, ex);
            flips.push_back(c.mask);
            flip_ok.push_back(c.ok);
        }

        // Syndrome probabilities: p(s) = (1/|G|) sum_g (-1)^{f_s.g} tr(X^g rho).
        std::unordered_map<BasisString, double> shift_weight;
        std::set<BasisString> in_group(group.begin(), group.end());
        for (const auto& [k, v] : cur.entries()) {
            const BasisString d = k.x ^ k.y;
            if (in_group.count(d)) shift_weight[d] += v.real();
        }
        for (std::size_t s = 0; s < flips.size(); ++s) {
            if (flip_ok[s]) continue;
            double ps = 0.0;
            for (const auto& [g, w] : shift_weight) ps += (qbits::parity(flips[s] & g) ? -w : w);
            ps *= inv_g;
            if (ps > flag_threshold) res.z_unresolved += ps;
        }

        // The channel sum_s Z^{f_s} P_s rho P_s Z^{f_s} has output entry
        // (a, b) = sum over x in a+G, y in b+G of C(x^y) rho(x, y), with
        // C(d) = |G|^-2 sum_s (-1)^{f_s.d}. It is constant on coset pairs.
        const detail::GF2Span span(group);
        std::unordered_map<BasisString, double> coeff;
        auto coefficient = [&](BasisString d) {
            auto it = coeff.find(d);
            if (it != coeff.end()) return it->second;
            double acc = 0.0;
            for (auto f : flips) acc += qbits::parity(f & d) ? -1.0 : 1.0;
            return coeff[d] = acc * inv_g * inv_g;
        };
        std::unordered_map<BasisPair, Complex, BasisPairHash> pairs;
        for (const auto& [k, v] : cur.entries()) {
            const double c = coefficient(k.x ^ k.y);
            if (c != 0.0) pairs[{span.reduce(k.x), span.reduce(k.y)}] += c * v;
        }
        SparseDensityOperator next(N * E);
        for (const auto& [k, v] : pairs) {
            if (std::abs(v) <= kPruneTolerance) continue;
            for (auto g : group)
                for (auto h : group) next.add(k.x ^ g, k.y ^ h, v);
        }
        next.canonicalize();
        cur = std::move(next);
    }

    if (res.x_unresolved > flag_threshold) {
        res.ok = false;
        res.detail = "bit-flip syndrome beyond the C1 error-and-erasure radius";
    }
    if (res.z_unresolved > flag_threshold) {
        res.ok = false;
        if (!res.detail.empty()) res.detail += "; ";
        res.detail += "phase-flip syndrome beyond the dual-C2 error-and-erasure radius";
    }
    res.state = std::move(cur);
    return res;
}

}  // namespace msync
