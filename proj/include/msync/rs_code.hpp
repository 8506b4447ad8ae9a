#pragma once

// Evaluation-form (generalized) Reed-Solomon codes over GF(2^E) and an
// error-and-erasure decoder.
//
// A codeword is c_i = v_i * f(x_i) for a message polynomial f of degree < K,
// evaluation points x_i and column multipliers v_i (all one for a plain RS
// code). Duals of such codes have the same shape, which lets the CSS
// recovery decode against C^perp with the same routine.

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf2e.hpp"

namespace msync {

using SymbolWord = std::vector<Symbol>;
using Matrix = std::vector<SymbolWord>;

namespace poly {

/// Horner evaluation; coefficients are little-endian.
inline Symbol eval(const FieldTable& f, std::span<const Symbol> coeffs, Symbol x) {
    Symbol acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = f.add(f.mul(acc, x), *it);
    return acc;
}

inline int degree(std::span<const Symbol> p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[static_cast<std::size_t>(i)] != 0) return i;
    return -1;
}

/// Quotient and remainder of num / den.
inline std::pair<SymbolWord, SymbolWord> divmod(const FieldTable& f, SymbolWord num,
                                                 std::span<const Symbol> den) {
    const int dd = degree(den);
    if (dd < 0) throw std::domain_error("poly::divmod: division by zero polynomial");
    const Symbol lead_inv = f.inv(den[static_cast<std::size_t>(dd)]);
    const int dn = degree(num);
    SymbolWord q(static_cast<std::size_t>(std::max(dn - dd + 1, 1)), 0);
    for (int i = dn; i >= dd; --i) {
        const Symbol c = num[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        const Symbol factor = f.mul(c, lead_inv);
        q[static_cast<std::size_t>(i - dd)] = factor;
        for (int j = 0; j <= dd; ++j)
            num[static_cast<std::size_t>(i - dd + j)] ^= f.mul(factor, den[static_cast<std::size_t>(j)]);
    }
    num.resize(static_cast<std::size_t>(std::max(dd, 1)));
    return {q, num};
}

}  // namespace poly

namespace linalg {

/// Reduced row-echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(const FieldTable& f, Matrix& a, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < a.size(); ++col) {
        std::size_t p = row;
        while (p < a.size() && a[p][col] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[row], a[p]);
        const Symbol s = f.inv(a[row][col]);
        for (auto& v : a[row]) v = f.mul(v, s);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][col] == 0) continue;
            const Symbol factor = a[r][col];
            for (std::size_t c = 0; c < a[r].size(); ++c) a[r][c] ^= f.mul(factor, a[row][c]);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

/// One solution of A x = b (free variables set to zero), or nullopt.
inline std::optional<SymbolWord> solve(const FieldTable& f, const Matrix& a, std::span<const Symbol> b) {
    if (a.size() != b.size()) throw std::invalid_argument("linalg::solve: shape mismatch");
    const std::size_t n = a.empty() ? 0 : a.front().size();
    Matrix aug = a;
    for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
    const auto pivots = rref(f, aug, n);
    for (std::size_t r = pivots.size(); r < aug.size(); ++r)
        if (aug[r][n] != 0) return std::nullopt;
    SymbolWord x(n, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][n];
    return x;
}

inline std::size_t rank(const FieldTable& f, Matrix a) {
    const std::size_t n = a.empty() ? 0 : a.front().size();
    return rref(f, a, n).size();
}

}  // namespace linalg

class RSCode {
public:
    RSCode(FieldTable field, int k, SymbolWord eval_points, SymbolWord multipliers = {})
        : field_(std::move(field)), k_(k), points_(std::move(eval_points)), mult_(std::move(multipliers)) {
        const int n = length();
        if (mult_.empty()) mult_.assign(points_.size(), 1);
        if (n < 1 || n > static_cast<int>(field_.order()))
            throw std::invalid_argument("RSCode: need 1 <= N <= 2^E - 1");
        if (k_ < 1 || k_ > n) throw std::invalid_argument("RSCode: need 1 <= K <= N");
        if (mult_.size() != points_.size()) throw std::invalid_argument("RSCode: multiplier count != N");
        auto sorted = points_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("RSCode: evaluation points must be distinct");
        for (auto p : points_)
            if (!field_.contains(p)) throw std::invalid_argument("RSCode: evaluation point outside field");
        for (auto v : mult_)
            if (v == 0 || !field_.contains(v)) throw std::invalid_argument("RSCode: multipliers must be nonzero");
    }

    /// Evaluation points alpha^0, alpha^1, ..., alpha^(N-1).
    static RSCode standard(const FieldTable& field, int n, int k) {
        if (n < 1 || n > static_cast<int>(field.order()))
            throw std::invalid_argument("RSCode: need 1 <= N <= 2^E - 1");
        SymbolWord pts;
        for (int i = 0; i < n; ++i) pts.push_back(field.exp(static_cast<std::uint32_t>(i)));
        return RSCode(field, k, std::move(pts));
    }

    const FieldTable& field() const noexcept { return field_; }
    int length() const noexcept { return static_cast<int>(points_.size()); }
    int dimension() const noexcept { return k_; }
    int min_distance() const noexcept { return length() - k_ + 1; }
    const SymbolWord& eval_points() const noexcept { return points_; }
    const SymbolWord& multipliers() const noexcept { return mult_; }

    bool is_plain() const {
        return std::all_of(mult_.begin(), mult_.end(), [](Symbol v) { return v == 1; });
    }

    SymbolWord encode(std::span<const Symbol> message) const {
        if (static_cast<int>(message.size()) != k_) throw std::invalid_argument("RSCode::encode: message length != K");
        SymbolWord c(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i)
            c[i] = field_.mul(mult_[i], poly::eval(field_, message, points_[i]));
        return c;
    }

    /// Rows v_i * x_i^j for j = 0..K-1.
    Matrix generator_matrix() const {
        Matrix g(static_cast<std::size_t>(k_), SymbolWord(points_.size()));
        for (int j = 0; j < k_; ++j)
            for (std::size_t i = 0; i < points_.size(); ++i)
                g[static_cast<std::size_t>(j)][i] = field_.mul(mult_[i], field_.pow(points_[i], j));
        return g;
    }

    bool contains(std::span<const Symbol> word) const {
        const auto h = parity_check_matrix();
        for (const auto& row : h) {
            Symbol s = 0;
            for (std::size_t i = 0; i < row.size(); ++i) s ^= field_.mul(row[i], word[i]);
            if (s != 0) return false;
        }
        return true;
    }

    Matrix parity_check_matrix() const;

    friend bool operator==(const RSCode& a, const RSCode& b) {
        return a.field_ == b.field_ && a.k_ == b.k_ && a.points_ == b.points_ && a.mult_ == b.mult_;
    }

private:
    FieldTable field_;
    int k_;
    SymbolWord points_;
    SymbolWord mult_;
};

/// The dual code, again in GRS form: same points, dimension N-K and
/// multipliers 1 / (v_i * prod_{j != i} (x_i - x_j)).
inline RSCode dual_code(const RSCode& code) {
    const auto& f = code.field();
    const auto& x = code.eval_points();
    SymbolWord w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Symbol prod = code.multipliers()[i];
        for (std::size_t j = 0; j < x.size(); ++j)
            if (j != i) prod = f.mul(prod, f.add(x[i], x[j]));
        w[i] = f.inv(prod);
    }
    if (code.dimension() == code.length())
        throw std::invalid_argument("dual_code: the full space has a zero-dimensional dual");
    return RSCode(f, code.length() - code.dimension(), x, std::move(w));
}

inline Matrix RSCode::parity_check_matrix() const {
    if (k_ == length()) return {};
    return dual_code(*this).generator_matrix();
}

/// Syndrome H * word.
inline SymbolWord syndrome(const RSCode& code, std::span<const Symbol> word) {
    const auto h = code.parity_check_matrix();
    SymbolWord s(h.size(), 0);
    for (std::size_t r = 0; r < h.size(); ++r)
        for (std::size_t i = 0; i < word.size(); ++i) s[r] ^= code.field().mul(h[r][i], word[i]);
    return s;
}

/// A received word of field symbols; nullopt marks an erasure.
struct ReceivedSymbolWord {
    std::vector<std::optional<Symbol>> symbols;

    std::vector<int> erasures() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < symbols.size(); ++i)
            if (!symbols[i]) out.push_back(static_cast<int>(i));
        return out;
    }

    static ReceivedSymbolWord from(std::span<const Symbol> word, std::span<const int> erased = {}) {
        ReceivedSymbolWord r;
        r.symbols.assign(word.begin(), word.end());
        for (int e : erased) r.symbols.at(static_cast<std::size_t>(e)).reset();
        return r;
    }
};

enum class RSDecodeStatus { ok, too_many_erasures, uncorrectable };

inline std::string to_string(RSDecodeStatus s) {
    switch (s) {
        case RSDecodeStatus::ok: return "ok";
        case RSDecodeStatus::too_many_erasures: return "too_many_erasures";
        case RSDecodeStatus::uncorrectable: return "uncorrectable";
    }
    return "unknown";
}

struct RSDecodeResult {
    RSDecodeStatus status = RSDecodeStatus::uncorrectable;
    SymbolWord message;
    SymbolWord codeword;
    int errors_corrected = 0;

    bool ok() const noexcept { return status == RSDecodeStatus::ok; }
};

/// Error-and-erasure decoding.
///
/// Erased coordinates are punctured away; the remaining n' coordinates form a
/// GRS code of the same dimension, decoded with the Berlekamp-Welch key
/// equation Q(x_i) = r_i E(x_i) with deg E = floor((n' - K) / 2). The
/// result is accepted only if it re-encodes within that radius, so every
/// pattern with e + 2m <= N - K is corrected and anything else is either
/// corrected or reported as a failure.
inline RSDecodeResult decode_errors_erasures(const RSCode& code, const ReceivedSymbolWord& word) {
    const auto& f = code.field();
    const int n = code.length();
    const int k = code.dimension();
    if (static_cast<int>(word.symbols.size()) != n)
        throw std::invalid_argument("decode_errors_erasures: word length != N");

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < word.symbols.size(); ++i)
        if (word.symbols[i]) {
            if (!f.contains(*word.symbols[i])) throw std::out_of_range("decode_errors_erasures: symbol outside field");
            kept.push_back(i);
        }
    RSDecodeResult result;
    const int np = static_cast<int>(kept.size());
    if (np < k) {
        result.status = RSDecodeStatus::too_many_erasures;
        return result;
    }
    const int radius = (np - k) / 2;

    // Unknowns: Q_0..Q_{K+radius-1}, then E_0..E_{radius-1}; E is monic.
    const std::size_t nq = static_cast<std::size_t>(k + radius);
    Matrix a;
    SymbolWord rhs;
    for (auto i : kept) {
        const Symbol x = code.eval_points()[i];
        const Symbol r = f.div(*word.symbols[i], code.multipliers()[i]);
        SymbolWord row(nq + static_cast<std::size_t>(radius), 0);
        Symbol xp = 1;
        for (std::size_t j = 0; j < nq; ++j) {
            row[j] = xp;
            if (static_cast<int>(j) < radius) row[nq + j] = f.mul(r, xp);
            xp = f.mul(xp, x);
        }
        a.push_back(std::move(row));
        rhs.push_back(f.mul(r, f.pow(x, radius)));
    }
    const auto sol = linalg::solve(f, a, rhs);
    if (!sol) return result;

    SymbolWord q(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(nq));
    SymbolWord e(sol->begin() + static_cast<std::ptrdiff_t>(nq), sol->end());
    e.push_back(1);
    auto [msg, rem] = poly::divmod(f, q, e);
    if (poly::degree(rem) >= 0 || poly::degree(msg) >= k) return result;
    msg.resize(static_cast<std::size_t>(k), 0);

    SymbolWord cw = code.encode(msg);
    int mismatches = 0;
    for (auto i : kept)
        if (cw[i] != *word.symbols[i]) ++mismatches;
    if (mismatches > radius) return result;

    result.status = RSDecodeStatus::ok;
    result.message = std::move(msg);
    result.codeword = std::move(cw);
    result.errors_corrected = mismatches;
    return result;
}

/// C2 subset of C1 on the same evaluation points.
inline std::pair<RSCode, RSCode> nested_pair(const FieldTable& field, int n, int k1, int k2) {
    if (!(1 <= k2 && k2 <= k1 && k1 <= n)) throw std::invalid_argument("nested_pair: need 1 <= K2 <= K1 <= N");
    return {RSCode::standard(field, n, k1), RSCode::standard(field, n, k2)};
}

/// Every codeword of `inner` is a codeword of `outer`.
inline bool is_subcode(const RSCode& inner, const RSCode& outer) {
    if (!(inner.field() == outer.field()) || inner.length() != outer.length()) return false;
    for (const auto& row : inner.generator_matrix())
        if (!outer.contains(row)) return false;
    return true;
}

/// All q^K codewords, in message order (message digits little-endian).
inline std::vector<SymbolWord> enumerate_codewords(const RSCode& code) {
    const std::uint64_t q = code.field().size();
    std::uint64_t total = 1;
    for (int i = 0; i < code.dimension(); ++i) {
        total *= q;
        if (total > (1u << 24)) throw std::length_error("enumerate_codewords: code too large");
    }
    std::vector<SymbolWord> out;
    out.reserve(total);
    SymbolWord msg(static_cast<std::size_t>(code.dimension()), 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t v = idx;
        for (auto& m : msg) {
            m = static_cast<Symbol>(v % q);
            v /= q;
        }
        out.push_back(code.encode(msg));
    }
    return out;
}

}  // namespace msync
