#pragma once

// Ground-truth diagnostics for the marker scan. Given the transmitted word,
// the received word and the true error pattern, classify every block into
// unchanged / substituted / deletion-detected / insertion-detected and audit
// the counting bounds that make the decoder's output RS-decodable.
//
// Test and harness surface only: the decoder itself never sees (J, K).

#include <algorithm>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "hagiwara.hpp"

namespace msync {

enum class BlockClass { unchanged, substituted, deletion, insertion };  // Q_B, Q_E, Q_D, Q_I

inline std::string to_string(BlockClass c) {
    switch (c) {
        case BlockClass::unchanged: return "Q_B";
        case BlockClass::substituted: return "Q_E";
        case BlockClass::deletion: return "Q_D";
        case BlockClass::insertion: return "Q_I";
    }
    return "?";
}

struct BlockRecord {
    int block = 0;
    // Left panel: the last marker zero of D_J(c), and where it lands in y.
    int j = 0;        // |[gamma_b] cap J|
    int k_bar = 0;    // insertions before that zero in y
    int xi = 0;       // inserted zeros directly after it
    int k = 0;        // k_bar + xi
    // Right panel: the prefix y_[gamma_b + tau_i].
    int kappa = 0;
    int k_prime = 0;  // insertions in y_[gamma_b + tau_i]
    int j_prime = 0;  // deletions in the matching prefix of c
    // Window partition (1-based inclusive; empty when lo > hi).
    int omega_lo = 0, omega_hi = -1;
    int gamma_lo = 0, gamma_hi = -1;
    bool marker_preserved = true;
    BlockClass cls = BlockClass::unchanged;
    Branch predicted = Branch::copy;
    Branch actual = Branch::copy;
    int l_before = 0;  // l_{b-1}
    int u = 0, v = 0;  // u_b, v_b
    bool erased = false;       // in P_e
    bool substituted = false;  // in P_s
    int n = 0;  // |[b] cap Q_E|
    int m = 0;  // |[b] cap (Q_D cup Q_I)|
    bool k_consistent = true;  // |[gamma - j + k] cap K| == k
};

struct BlockDiagnostics {
    CodeParams params;
    ShiftBudget budget;
    ScanResult scan;
    std::vector<BlockRecord> blocks;
    std::vector<int> P_e, P_s;
    std::vector<int> Q_B, Q_E, Q_D, Q_I;
    std::vector<int> marker_preserve;  // M(P)
};

/// Computes every per-block quantity from ground truth. Requires the
/// regime 1 <= t_d, 1 <= t_i, t_d + t_i <= t (throws std::domain_error
/// otherwise, since the last marker zero may not survive).
inline BlockDiagnostics classify_blocks(std::span<const std::uint8_t> c, std::span<const std::uint8_t> y,
                                        const ErrorPattern& pat, const CodeParams& p) {
    const int td = pat.num_deletions(), ti = pat.num_insertions();
    if (td < 1 || ti < 1 || td + ti > p.t)
        throw std::domain_error("classify_blocks: need t_d, t_i >= 1 and t_d + t_i <= t");
    if (static_cast<int>(c.size()) != p.codeword_length())
        throw std::invalid_argument("classify_blocks: codeword length mismatch");

    BlockDiagnostics d;
    d.params = p;
    d.scan = algorithm1(y, p);
    if (!d.scan.ok()) throw std::logic_error("classify_blocks: scan rejected an in-regime word: " + d.scan.error);
    d.budget = d.scan.budget;
    const auto& s = d.budget;

    const int L = static_cast<int>(c.size());
    const int Ly = static_cast<int>(y.size());
    std::vector<int> del_prefix(static_cast<std::size_t>(L) + 1, 0), ins_prefix(static_cast<std::size_t>(Ly) + 1, 0);
    {
        std::vector<char> is_del(static_cast<std::size_t>(L) + 1, 0), is_ins(static_cast<std::size_t>(Ly) + 1, 0);
        for (int x : pat.deletions) is_del[static_cast<std::size_t>(x)] = 1;
        for (int x : pat.insertions) is_ins[static_cast<std::size_t>(x)] = 1;
        for (int i = 1; i <= L; ++i) del_prefix[static_cast<std::size_t>(i)] = del_prefix[static_cast<std::size_t>(i - 1)] + is_del[static_cast<std::size_t>(i)];
        for (int i = 1; i <= Ly; ++i) ins_prefix[static_cast<std::size_t>(i)] = ins_prefix[static_cast<std::size_t>(i - 1)] + is_ins[static_cast<std::size_t>(i)];
    }
    // survivor[k]: c-position of the k-th symbol of D_J(c); landing[k]: its y-position.
    std::vector<int> survivor(1, 0), landing(1, 0);
    {
        std::size_t next = 0;
        for (int i = 1; i <= L; ++i) {
            if (next < pat.deletions.size() && pat.deletions[next] == i) {
                ++next;
                continue;
            }
            survivor.push_back(i);
        }
        std::size_t nk = 0;
        for (int i = 1; i <= Ly; ++i) {
            if (nk < pat.insertions.size() && pat.insertions[nk] == i) {
                ++nk;
                continue;
            }
            landing.push_back(i);
        }
    }
    const int Ld = static_cast<int>(survivor.size()) - 1;
    auto ins_in = [&](int pos) { return ins_prefix[static_cast<std::size_t>(std::clamp(pos, 0, Ly))]; };

    int jp_prev = 0, kp_prev = 0, n = 0, m = 0;
    for (int b = 1; b <= p.N; ++b) {
        const auto g = BlockGeometry::of(p, s, b);
        const auto& step = d.scan.trace[static_cast<std::size_t>(b - 1)];
        BlockRecord r;
        r.block = b;
        r.j = del_prefix[static_cast<std::size_t>(g.gamma)];

        const int zero_idx = g.gamma - r.j;
        if (zero_idx < 1 || zero_idx > Ld) throw std::logic_error("classify_blocks: last marker zero lost");
        const int zero_src = survivor[static_cast<std::size_t>(zero_idx)];
        if (zero_src <= g.gamma - p.t || zero_src > g.gamma)
            throw std::logic_error("classify_blocks: last surviving symbol before gamma is not a marker zero");
        const int zero_y = landing[static_cast<std::size_t>(zero_idx)];
        r.k_bar = zero_y - zero_idx;
        for (int i = zero_y + 1; i <= Ly && y[static_cast<std::size_t>(i - 1)] == 0; ++i) ++r.xi;
        r.k = r.k_bar + r.xi;
        r.k_consistent = ins_in(g.gamma - r.j + r.k) == r.k;

        const int right = g.window_hi;
        while (std::binary_search(pat.insertions.begin(), pat.insertions.end(), right - r.kappa)) ++r.kappa;
        r.k_prime = ins_in(right - r.kappa) + r.kappa;
        const int q = right - r.k_prime;
        if (q < 1 || q > Ld) throw std::logic_error("classify_blocks: right-panel anchor out of range");
        r.j_prime = survivor[static_cast<std::size_t>(q)] - q;

        r.omega_lo = g.window_lo;
        r.omega_hi = g.gamma - r.j + r.k_bar - 1;
        r.gamma_lo = g.gamma - r.j + r.k + 1;
        r.gamma_hi = g.window_hi;
        bool preserved = true;
        for (int i = std::max(r.omega_lo, g.window_lo); i <= std::min(r.omega_hi, g.window_hi); ++i)
            if (y[static_cast<std::size_t>(i - 1)] != 0) preserved = false;
        for (int i = std::max(r.gamma_lo, g.window_lo); i <= r.gamma_hi; ++i)
            if (y[static_cast<std::size_t>(i - 1)] != 1) preserved = false;
        r.marker_preserved = preserved;

        r.l_before = step.l;
        const int diff = r.k - r.j;
        if (!preserved || diff > r.l_before)
            r.cls = BlockClass::insertion;
        else if (diff < r.l_before)
            r.cls = BlockClass::deletion;
        else if (jp_prev == r.j && kp_prev == r.k)
            r.cls = BlockClass::unchanged;
        else
            r.cls = BlockClass::substituted;

        if (!preserved || diff > r.l_before)
            r.predicted = Branch::insertion;
        else if (diff < r.l_before)
            r.predicted = Branch::deletion;
        else
            r.predicted = Branch::copy;
        r.actual = step.branch;

        const int u_prev = b == 1 ? 0 : d.scan.trace[static_cast<std::size_t>(b - 2)].u;
        const int v_prev = b == 1 ? 0 : d.scan.trace[static_cast<std::size_t>(b - 2)].v;
        r.u = step.u;
        r.v = step.v;
        r.erased = u_prev < r.u || v_prev < r.v;
        if (!r.erased) {
            const int lb = r.v - r.u;
            const auto got = slice(y, g.beta + lb + 1, g.beta + lb + p.E);
            const auto want = slice(c, g.beta + 1, g.beta + p.E);
            r.substituted = got != want;
        }
        if (r.cls == BlockClass::substituted) ++n;
        if (r.cls == BlockClass::deletion || r.cls == BlockClass::insertion) ++m;
        r.n = n;
        r.m = m;

        if (r.erased) d.P_e.push_back(b);
        if (r.substituted) d.P_s.push_back(b);
        if (preserved) d.marker_preserve.push_back(b);
        switch (r.cls) {
            case BlockClass::unchanged: d.Q_B.push_back(b); break;
            case BlockClass::substituted: d.Q_E.push_back(b); break;
            case BlockClass::deletion: d.Q_D.push_back(b); break;
            case BlockClass::insertion: d.Q_I.push_back(b); break;
        }
        jp_prev = r.j_prime;
        kp_prev = r.k_prime;
        d.blocks.push_back(r);
    }
    return d;
}

/// Every violated bound, as human-readable lines; empty means all hold.
inline std::vector<std::string> audit(const BlockDiagnostics& d, std::span<const std::uint8_t> c,
                                      std::span<const std::uint8_t> y) {
    std::vector<std::string> bad;
    const auto& p = d.params;
    const auto& s = d.budget;
    auto report = [&](int b, const std::string& what) {
        std::ostringstream os;
        os << "block " << b << ": " << what;
        bad.push_back(os.str());
    };

    int jp_prev = 0, kp_prev = 0, u_prev = 0, v_prev = 0;
    for (const auto& r : d.blocks) {
        const int b = r.block;
        if (!(jp_prev <= r.j && r.j <= r.j_prime && r.j_prime <= s.tau_d)) report(b, "j chain broken");
        if (!(kp_prev <= r.k && r.k <= r.k_prime && r.k_prime <= s.tau_i)) report(b, "k chain broken");
        if (!r.k_consistent) report(b, "k_b != inserted symbols up to the effective last zero");
        if (r.predicted != r.actual) report(b, "branch differs from the case table");

        const bool u_same = r.u == u_prev, v_same = r.v == v_prev;
        switch (r.cls) {
            case BlockClass::unchanged: {
                const int beta = p.block_start(b);
                for (int i = 1; i <= p.E; ++i)
                    if (y[static_cast<std::size_t>(beta + r.l_before + i - 1)] != c[static_cast<std::size_t>(beta + i - 1)]) {
                        report(b, "Q_B block not copied verbatim");
                        break;
                    }
                if (!u_same || !v_same) report(b, "Q_B changed u or v");
                break;
            }
            case BlockClass::substituted:
                if (!u_same || !v_same) report(b, "Q_E changed u or v");
                break;
            case BlockClass::deletion:
                if (!(u_prev < r.u)) report(b, "Q_D without a detected deletion");
                break;
            case BlockClass::insertion:
                if (!(v_prev < r.v)) report(b, "Q_I without a detected insertion");
                break;
        }
        const bool in_de = r.cls == BlockClass::deletion || r.cls == BlockClass::insertion;
        if (r.erased != in_de) report(b, "P_e differs from Q_D cup Q_I");
        if (r.substituted && r.cls != BlockClass::substituted) report(b, "P_s not inside Q_E");
        if (!(r.u <= r.j_prime - r.n)) report(b, "u_b > j'_b - n_b");
        if (!(r.v <= r.k_prime - r.n)) report(b, "v_b > k'_b - n_b");
        if (!(r.m + 2 * r.n <= r.j_prime + r.k_prime)) report(b, "m_b + 2 n_b > j'_b + k'_b");

        const auto& zb = d.scan.z[static_cast<std::size_t>(b - 1)];
        if (!r.erased && !r.substituted) {
            const int beta = p.block_start(b);
            if (!zb || *zb != slice(c, beta + 1, beta + p.E)) report(b, "clean block not reproduced");
        }
        jp_prev = r.j_prime;
        kp_prev = r.k_prime;
        u_prev = r.u;
        v_prev = r.v;
    }
    if (d.P_e != d.scan.erased) bad.push_back("P_e differs from the scan's erased set");
    const int cost = static_cast<int>(d.P_e.size()) + 2 * static_cast<int>(d.P_s.size());
    if (cost > p.t) {
        std::ostringstream os;
        os << "|P_e| + 2|P_s| = " << cost << " > t = " << p.t;
        bad.push_back(os.str());
    }
    return bad;
}

}  // namespace msync
