#pragma once

// Marker-interleaved codes: c = c_1 0^t 1^t c_2 0^t 1^t ... c_N 0^t 1^t,
// where (c_1, ..., c_N) is the binary expansion of an RS codeword, and the
// marker-scanning decoder that turns t_d deletions plus t_i insertions into
// block erasures and block substitutions.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bits.hpp"
#include "gf2e.hpp"
#include "rs_code.hpp"

namespace msync {

struct CodeParams {
    int E = 1;
    int N = 1;
    int K1 = 1;
    int K2 = 1;
    int t = 1;

    int stride() const noexcept { return E + 2 * t; }
    int codeword_length() const noexcept { return N * stride(); }
    int logical_qubits() const noexcept { return N * E; }

    /// Position just before block b (1-based b).
    int block_start(int b) const noexcept { return stride() * (b - 1); }
    /// Position of the last 0 of marker b.
    int last_marker_zero(int b) const noexcept { return block_start(b) + E + t; }

    /// Block layout only; enough for the marker scan.
    void validate_layout() const {
        if (E < 1 || E > kMaxExtensionDegree) throw std::invalid_argument("CodeParams: E must be in [1, 16]");
        if (N < 1) throw std::invalid_argument("CodeParams: N must be >= 1");
        if (t < 1) throw std::invalid_argument("CodeParams: t must be >= 1");
    }

    /// Classical codec: the outer RS code must absorb t erasures.
    void validate_classical() const {
        validate_layout();
        if (N > static_cast<int>((1u << E) - 1)) throw std::invalid_argument("CodeParams: need N <= 2^E - 1");
        if (K1 < 1 || K1 > N) throw std::invalid_argument("CodeParams: need 1 <= K1 <= N");
        if (N - K1 < t) throw std::invalid_argument("CodeParams: need N - K1 >= t");
    }

    /// Quantum codec: additionally K2 <= K1 and t <= min(N - K1, K2).
    void validate_quantum() const {
        validate_classical();
        if (K2 < 1 || K2 > K1) throw std::invalid_argument("CodeParams: need 1 <= K2 <= K1");
        if (t > K2) throw std::invalid_argument("CodeParams: need t <= K2");
    }

    friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

inline std::pair<RSCode, RSCode> nested_pair(const CodeParams& p) {
    return nested_pair(FieldTable(p.E), p.N, p.K1, p.K2);
}

/// Window sizes derived from the observed length change r = t_i - t_d.
struct ShiftBudget {
    int r = 0;
    int tau_d = 0;  // floor((t - r) / 2)
    int tau_i = 0;  // floor((t + r) / 2)

    int tau() const noexcept { return tau_d + tau_i; }
};

namespace detail {
inline int floor_div2(int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
}  // namespace detail

inline ShiftBudget shift_budget(const CodeParams& p, int received_length) {
    ShiftBudget s;
    s.r = received_length - p.codeword_length();
    s.tau_d = detail::floor_div2(p.t - s.r);
    s.tau_i = detail::floor_div2(p.t + s.r);
    return s;
}

/// Per-block positions used by the marker scan (all 1-based).
struct BlockGeometry {
    int block = 1;
    int beta = 0;         // position before c_b
    int gamma = 0;        // last 0 of marker b
    int window_lo = 0;    // gamma - tau_d + 1
    int window_hi = 0;    // gamma + tau_i

    static BlockGeometry of(const CodeParams& p, const ShiftBudget& s, int b) {
        BlockGeometry g;
        g.block = b;
        g.beta = p.block_start(b);
        g.gamma = p.last_marker_zero(b);
        g.window_lo = g.gamma - s.tau_d + 1;
        g.window_hi = g.gamma + s.tau_i;
        return g;
    }
};

/// Blocks from B(C) interleaved with 0^t 1^t markers.
inline Bits encode_classical(std::span<const Bits> blocks, const CodeParams& p) {
    p.validate_layout();
    if (static_cast<int>(blocks.size()) != p.N) throw std::invalid_argument("encode_classical: expected N blocks");
    Bits c;
    c.reserve(static_cast<std::size_t>(p.codeword_length()));
    for (const auto& blk : blocks) {
        if (static_cast<int>(blk.size()) != p.E) throw std::invalid_argument("encode_classical: block length != E");
        c.insert(c.end(), blk.begin(), blk.end());
        c.insert(c.end(), static_cast<std::size_t>(p.t), 0);
        c.insert(c.end(), static_cast<std::size_t>(p.t), 1);
    }
    return c;
}

/// RS-encode a message of K1 symbols, expand with the basis, add markers.
inline Bits encode_message(std::span<const Symbol> message, const RSCode& outer, const BasisExpansion& ex,
                           const CodeParams& p) {
    const auto cw = outer.encode(message);
    std::vector<Bits> blocks;
    for (auto s : cw) blocks.push_back(ex.expand(s));
    return encode_classical(blocks, p);
}

/// Which line of the scan fired for a block.
enum class Branch { copy = 6, deletion = 8, insertion = 10 };

struct BranchStep {
    int block = 0;
    Branch branch = Branch::copy;
    int w = 0;        // detected deletions (deletion branch only)
    int l = 0;        // -u + v before the step
    int u = 0;        // after the step
    int v = 0;        // after the step
    Bits window;      // y_b, the observed marker window
};

/// Classifies one marker window against the expected shift l.
struct BranchDecision {
    Branch branch = Branch::insertion;
    int w = 0;
};

inline BranchDecision decide_branch(std::span<const std::uint8_t> window, int l, const ShiftBudget& s) {
    int zeros = 0;
    while (zeros < static_cast<int>(window.size()) && window[static_cast<std::size_t>(zeros)] == 0) ++zeros;
    bool monotone = true;
    for (std::size_t i = static_cast<std::size_t>(zeros); i < window.size(); ++i)
        if (window[i] != 1) monotone = false;
    const int expected = s.tau_d + l;
    if (monotone && zeros == expected) return {Branch::copy, 0};
    if (monotone && zeros < expected) return {Branch::deletion, expected - zeros};
    return {Branch::insertion, 0};
}

/// A decoded block; nullopt is the erasure block ?^(E).
using MaybeBlock = std::optional<Bits>;

enum class ScanStatus { ok, malformed };

struct ScanResult {
    ScanStatus status = ScanStatus::ok;
    std::string error;
    ShiftBudget budget;
    std::vector<MaybeBlock> z;
    std::vector<int> erased;  // P, 1-based block indices
    std::vector<BranchStep> trace;

    bool ok() const noexcept { return status == ScanStatus::ok; }
};

/// Runs the marker scan on a received word y of length N(E+2t) + r.
inline ScanResult algorithm1(std::span<const std::uint8_t> y, const CodeParams& p) {
    p.validate_layout();
    ScanResult res;
    res.budget = shift_budget(p, static_cast<int>(y.size()));
    const auto& s = res.budget;
    auto fail = [&](std::string why) {
        res.status = ScanStatus::malformed;
        res.error = std::move(why);
        return res;
    };
    if (s.tau_d < 0 || s.tau_i < 0) return fail("length change exceeds the marker budget t");

    const int len = static_cast<int>(y.size());
    int u = 0, v = 0;
    for (int b = 1; b <= p.N; ++b) {
        const int l = -u + v;
        const auto g = BlockGeometry::of(p, s, b);
        if (g.window_lo < 1 || g.window_hi > len) return fail("marker window of block " + std::to_string(b) + " out of range");
        Bits window = slice(y, g.window_lo, g.window_hi);
        const auto d = decide_branch(window, l, s);
        BranchStep step{b, d.branch, d.w, l, u, v, window};
        switch (d.branch) {
            case Branch::copy: {
                const int lo = g.beta + l + 1, hi = g.beta + l + p.E;
                if (lo < 1 || hi > len) return fail("block " + std::to_string(b) + " out of range");
                res.z.emplace_back(slice(y, lo, hi));
                break;
            }
            case Branch::deletion:
                res.z.emplace_back(std::nullopt);
                res.erased.push_back(b);
                u += d.w;
                break;
            case Branch::insertion:
                res.z.emplace_back(std::nullopt);
                res.erased.push_back(b);
                v += 1;
                break;
        }
        step.u = u;
        step.v = v;
        res.trace.push_back(std::move(step));
    }
    return res;
}

enum class DecodeStatus { ok, malformed_input, rs_failure };

inline std::string to_string(DecodeStatus s) {
    switch (s) {
        case DecodeStatus::ok: return "ok";
        case DecodeStatus::malformed_input: return "malformed_input";
        case DecodeStatus::rs_failure: return "rs_failure";
    }
    return "unknown";
}

struct DecodeOutcome {
    DecodeStatus status = DecodeStatus::ok;
    std::string detail;
    ScanResult scan;
    std::optional<SymbolWord> message;
    RSDecodeResult rs;

    bool ok() const noexcept { return status == DecodeStatus::ok; }
};

/// Marker scan, then RS error-and-erasure decoding of the contracted blocks.
inline DecodeOutcome decode(std::span<const std::uint8_t> y, const CodeParams& p, const RSCode& outer,
                            const BasisExpansion& ex) {
    DecodeOutcome out;
    out.scan = algorithm1(y, p);
    if (!out.scan.ok()) {
        out.status = DecodeStatus::malformed_input;
        out.detail = out.scan.error;
        return out;
    }
    ReceivedSymbolWord word;
    for (const auto& blk : out.scan.z)
        word.symbols.push_back(blk ? std::optional<Symbol>(ex.contract(*blk)) : std::nullopt);
    out.rs = decode_errors_erasures(outer, word);
    if (!out.rs.ok()) {
        out.status = DecodeStatus::rs_failure;
        out.detail = to_string(out.rs.status);
        return out;
    }
    out.message = out.rs.message;
    return out;
}

}  // namespace msync
