#pragma once

// Arithmetic in GF(2^E), the absolute trace, dual and self-dual bases, and
// the binary expansion of elements and codes.
//
// Elements are little-endian coefficient bitmasks: bit i holds the
// coefficient of x^i.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bits.hpp"

namespace msync {

using Symbol = std::uint32_t;

inline constexpr int kMaxExtensionDegree = 16;

/// Built-in primitive polynomials, indexed by degree (bit i = coeff of x^i).
inline constexpr std::array<std::uint32_t, kMaxExtensionDegree + 1> kPrimitivePolynomials = {
    0,
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x89,     // x^7 + x^3 + 1
    0x11D,    // x^8 + x^4 + x^3 + x^2 + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
};

/// GF(2^E) with log/antilog tables over a primitive polynomial.
/// Immutable after construction.
class FieldTable {
public:
    explicit FieldTable(int degree)
        : FieldTable(degree, degree >= 1 && degree <= kMaxExtensionDegree
                                 ? kPrimitivePolynomials[static_cast<std::size_t>(degree)]
                                 : 0) {}

    FieldTable(int degree, std::uint32_t poly) : degree_(degree), poly_(poly) {
        if (degree < 1 || degree > kMaxExtensionDegree)
            throw std::invalid_argument("FieldTable: extension degree must be in [1, 16]");
        if ((poly >> degree) != 1u)
            throw std::invalid_argument("FieldTable: polynomial must have degree E");
        const std::uint32_t q = size();
        exp_.assign(2 * (q - 1), 0);
        log_.assign(q, 0);
        std::uint32_t x = 1;
        std::vector<bool> seen(q, false);
        for (std::uint32_t i = 0; i < q - 1; ++i) {
            if (seen[x]) throw std::invalid_argument("FieldTable: polynomial is not primitive");
            seen[x] = true;
            exp_[i] = x;
            log_[x] = i;
            x <<= 1;
            if (x & q) x ^= poly;
        }
        if (x != 1) throw std::invalid_argument("FieldTable: polynomial is not primitive");
        for (std::uint32_t i = q - 1; i < 2 * (q - 1); ++i) exp_[i] = exp_[i - (q - 1)];

        trace_.assign(q, 0);
        for (std::uint32_t a = 0; a < q; ++a) {
            Symbol acc = 0, p = a;
            for (int i = 0; i < degree; ++i) {
                acc ^= p;
                p = mul(p, p);
            }
            if (acc > 1) throw std::logic_error("FieldTable: trace left GF(2)");
            trace_[a] = static_cast<std::uint8_t>(acc);
        }
    }

    int degree() const noexcept { return degree_; }
    std::uint32_t poly() const noexcept { return poly_; }
    std::uint32_t size() const noexcept { return 1u << degree_; }
    std::uint32_t order() const noexcept { return size() - 1; }

    bool contains(Symbol a) const noexcept { return a < size(); }

    Symbol add(Symbol a, Symbol b) const noexcept { return a ^ b; }

    Symbol mul(Symbol a, Symbol b) const noexcept {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }

    Symbol inv(Symbol a) const {
        if (a == 0) throw std::domain_error("FieldTable: inverse of zero");
        return exp_[(order() - log_[a]) % order()];
    }

    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

    Symbol pow(Symbol a, long long n) const {
        if (a == 0) {
            if (n < 0) throw std::domain_error("FieldTable: negative power of zero");
            return n == 0 ? 1 : 0;
        }
        const long long ord = order();
        long long e = (static_cast<long long>(log_[a]) * (n % ord)) % ord;
        if (e < 0) e += ord;
        return exp_[static_cast<std::size_t>(e)];
    }

    /// alpha^i for the primitive element alpha = x.
    Symbol exp(std::uint32_t i) const noexcept { return exp_[i % order()]; }

    std::uint32_t log(Symbol a) const {
        if (a == 0) throw std::domain_error("FieldTable: log of zero");
        return log_[a];
    }

    /// Absolute trace Tr(a) = a + a^2 + ... + a^(2^(E-1)), an element of GF(2).
    int trace(Symbol a) const noexcept { return trace_[a]; }

    friend bool operator==(const FieldTable& a, const FieldTable& b) noexcept {
        return a.degree_ == b.degree_ && a.poly_ == b.poly_;
    }

private:
    int degree_;
    std::uint32_t poly_;
    std::vector<Symbol> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint8_t> trace_;
};

/// A field value bound to its table. Mixing tables is an error.
class FieldElement {
public:
    FieldElement(const FieldTable& table, Symbol value) : table_(&table), value_(value) {
        if (!table.contains(value)) throw std::out_of_range("FieldElement: value outside field");
    }

    Symbol value() const noexcept { return value_; }
    const FieldTable& table() const noexcept { return *table_; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        check_same(a, b);
        return {*a.table_, a.table_->add(a.value_, b.value_)};
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        check_same(a, b);
        return {*a.table_, a.table_->mul(a.value_, b.value_)};
    }
    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return *a.table_ == *b.table_ && a.value_ == b.value_;
    }

    FieldElement inverse() const { return {*table_, table_->inv(value_)}; }
    FieldElement pow(long long n) const { return {*table_, table_->pow(value_, n)}; }
    int trace() const noexcept { return table_->trace(value_); }

private:
    static void check_same(const FieldElement& a, const FieldElement& b) {
        if (!(*a.table_ == *b.table_))
            throw std::invalid_argument("FieldElement: operands belong to different fields");
    }

    const FieldTable* table_;
    Symbol value_;
};

struct Basis {
    std::vector<Symbol> elements;
    bool self_dual = false;

    std::size_t size() const noexcept { return elements.size(); }
    friend bool operator==(const Basis& a, const Basis& b) { return a.elements == b.elements; }
};

namespace detail {

/// Rank over GF(2) of field elements viewed as E-bit vectors.
inline int gf2_rank(std::vector<std::uint32_t> rows) {
    int rank = 0;
    for (int bit = 31; bit >= 0; --bit) {
        auto pivot = std::find_if(rows.begin() + rank, rows.end(),
                                  [bit](std::uint32_t r) { return (r >> bit) & 1u; });
        if (pivot == rows.end()) continue;
        std::iter_swap(rows.begin() + rank, pivot);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (static_cast<int>(i) != rank && ((rows[i] >> bit) & 1u)) rows[i] ^= rows[static_cast<std::size_t>(rank)];
        ++rank;
    }
    return rank;
}

}  // namespace detail

inline bool is_basis(const FieldTable& f, std::span<const Symbol> elems) {
    if (static_cast<int>(elems.size()) != f.degree()) return false;
    for (auto e : elems)
        if (!f.contains(e)) return false;
    return detail::gf2_rank({elems.begin(), elems.end()}) == f.degree();
}

inline bool is_self_dual(const FieldTable& f, std::span<const Symbol> elems) {
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < elems.size(); ++j)
            if (f.trace(f.mul(elems[i], elems[j])) != (i == j ? 1 : 0)) return false;
    return true;
}

inline Basis make_basis(const FieldTable& f, std::vector<Symbol> elems) {
    if (!is_basis(f, elems)) throw std::invalid_argument("make_basis: elements are not a basis");
    const bool sd = is_self_dual(f, elems);
    return Basis{std::move(elems), sd};
}

/// Dual basis B' with Tr(b_i * b'_j) = delta_ij.
///
/// Column k of the system matrix is the image of x^k under
/// x -> (Tr(b_1 x), ..., Tr(b_E x)); each b'_j solves M a = e_j over GF(2).
inline Basis dual_basis(const FieldTable& f, const Basis& basis) {
    const int E = f.degree();
    if (!is_basis(f, basis.elements)) throw std::invalid_argument("dual_basis: not a basis");

    // Augmented rows: low E bits are the coefficients of x^0..x^(E-1),
    // bits E..2E-1 carry the identity for simultaneous solving.
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(E));
    for (int i = 0; i < E; ++i) {
        std::uint64_t r = 0;
        for (int k = 0; k < E; ++k)
            if (f.trace(f.mul(basis.elements[static_cast<std::size_t>(i)], Symbol{1} << k)))
                r |= std::uint64_t{1} << k;
        r |= std::uint64_t{1} << (E + i);
        rows[static_cast<std::size_t>(i)] = r;
    }
    for (int col = 0; col < E; ++col) {
        auto pivot = std::find_if(rows.begin() + col, rows.end(),
                                  [col](std::uint64_t r) { return (r >> col) & 1u; });
        if (pivot == rows.end()) throw std::logic_error("dual_basis: singular trace system");
        std::iter_swap(rows.begin() + col, pivot);
        for (int i = 0; i < E; ++i)
            if (i != col && ((rows[static_cast<std::size_t>(i)] >> col) & 1u))
                rows[static_cast<std::size_t>(i)] ^= rows[static_cast<std::size_t>(col)];
    }
    // Row k now reads x^k = sum_i (M^-1)_{k,i} e_i, so b'_j has bit k set
    // iff (M^-1)_{k,j} = 1.
    std::vector<Symbol> dual(static_cast<std::size_t>(E), 0);
    for (int k = 0; k < E; ++k)
        for (int j = 0; j < E; ++j)
            if ((rows[static_cast<std::size_t>(k)] >> (E + j)) & 1u) dual[static_cast<std::size_t>(j)] |= Symbol{1} << k;
    return make_basis(f, std::move(dual));
}

/// First self-dual basis in lexicographic order, found by depth-first search
/// over pairwise trace-orthogonal elements of trace one. An orthonormal set of
/// size E is automatically linearly independent.
inline Basis find_self_dual_basis(const FieldTable& f) {
    const int E = f.degree();
    std::vector<Symbol> candidates;
    for (Symbol a = 1; a < f.size(); ++a)
        if (f.trace(f.mul(a, a)) == 1) candidates.push_back(a);

    std::vector<Symbol> chosen;
    auto search = [&](auto&& self, std::size_t from) -> bool {
        if (static_cast<int>(chosen.size()) == E) return true;
        for (std::size_t i = from; i < candidates.size(); ++i) {
            const Symbol c = candidates[i];
            bool ok = std::all_of(chosen.begin(), chosen.end(),
                                  [&](Symbol b) { return f.trace(f.mul(b, c)) == 0; });
            if (!ok) continue;
            chosen.push_back(c);
            if (self(self, i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (!search(search, 0)) throw std::logic_error("find_self_dual_basis: none found");
    return make_basis(f, chosen);
}

/// Coordinates of field elements in a fixed basis, with precomputed tables.
class BasisExpansion {
public:
    BasisExpansion(const FieldTable& f, Basis basis)
        : field_(f), basis_(std::move(basis)), dual_(dual_basis(f, basis_)) {
        const int E = f.degree();
        coords_.assign(f.size(), 0);
        for (Symbol beta = 0; beta < f.size(); ++beta) {
            std::uint32_t c = 0;
            for (int i = 0; i < E; ++i)
                if (f.trace(f.mul(beta, dual_.elements[static_cast<std::size_t>(i)]))) c |= 1u << i;
            coords_[beta] = c;
        }
    }

    const FieldTable& field() const noexcept { return field_; }
    const Basis& basis() const noexcept { return basis_; }
    const Basis& dual() const noexcept { return dual_; }
    int width() const noexcept { return field_.degree(); }

    /// (a_1, ..., a_E) with beta = sum a_i b_i, where a_i = Tr(beta * b'_i).
    Bits expand(Symbol beta) const {
        if (!field_.contains(beta)) throw std::out_of_range("expand: value outside field");
        Bits out(static_cast<std::size_t>(width()));
        for (int i = 0; i < width(); ++i) out[static_cast<std::size_t>(i)] = (coords_[beta] >> i) & 1u;
        return out;
    }

    /// Coordinates packed little-endian: bit i-1 holds a_i.
    std::uint32_t packed(Symbol beta) const { return coords_.at(beta); }

    Symbol contract(std::span<const std::uint8_t> bits) const {
        if (static_cast<int>(bits.size()) != width())
            throw std::invalid_argument("contract: expected exactly E bits");
        Symbol acc = 0;
        for (int i = 0; i < width(); ++i)
            if (bits[static_cast<std::size_t>(i)]) acc ^= basis_.elements[static_cast<std::size_t>(i)];
        return acc;
    }

    /// Concatenation of per-symbol expansions.
    Bits expand_word(std::span<const Symbol> word) const {
        Bits out;
        out.reserve(word.size() * static_cast<std::size_t>(width()));
        for (auto s : word) {
            auto b = expand(s);
            out.insert(out.end(), b.begin(), b.end());
        }
        return out;
    }

    std::vector<Symbol> contract_word(std::span<const std::uint8_t> bits) const {
        if (bits.size() % static_cast<std::size_t>(width()) != 0)
            throw std::invalid_argument("contract_word: length is not a multiple of E");
        std::vector<Symbol> out;
        for (std::size_t i = 0; i < bits.size(); i += static_cast<std::size_t>(width()))
            out.push_back(contract(bits.subspan(i, static_cast<std::size_t>(width()))));
        return out;
    }

private:
    FieldTable field_;
    Basis basis_;
    Basis dual_;
    std::vector<std::uint32_t> coords_;
};

inline Bits expand(const FieldTable& f, Symbol beta, const Basis& basis) {
    return BasisExpansion(f, basis).expand(beta);
}

inline Symbol contract(const FieldTable& f, std::span<const std::uint8_t> bits, const Basis& basis) {
    return BasisExpansion(f, basis).contract(bits);
}

/// Binary image B(C) of a set of field codewords.
inline std::vector<Bits> expand_code(const std::vector<std::vector<Symbol>>& codewords,
                                     const BasisExpansion& ex) {
    std::vector<Bits> out;
    out.reserve(codewords.size());
    for (const auto& c : codewords) out.push_back(ex.expand_word(c));
    return out;
}

}  // namespace msync
