#pragma once

// Sparse density-operator simulator for a few dozen qubits.
//
// A state on n qubits is stored as the map (x, y) -> m_{x,y} of its nonzero
// matrix entries in the computational basis. Qubit i (1-based) is bit i-1
// of the 64-bit key, so the string x_1 x_2 ... x_n reads low bit first.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "perm_decomp.hpp"

namespace msync {

using Complex = std::complex<double>;
using BasisString = std::uint64_t;

inline constexpr int kMaxQubits = 64;
inline constexpr double kPruneTolerance = 1e-14;

namespace qbits {

inline BasisString mask(int n) { return n >= 64 ? ~BasisString{0} : ((BasisString{1} << n) - 1); }

inline int get(BasisString x, int i) { return static_cast<int>((x >> (i - 1)) & 1u); }

inline BasisString set(BasisString x, int i, int v) {
    const BasisString bit = BasisString{1} << (i - 1);
    return v ? (x | bit) : (x & ~bit);
}

/// Drops bit i and closes the gap.
inline BasisString remove(BasisString x, int i) {
    const BasisString low = x & mask(i - 1);
    const BasisString high = i >= 64 ? 0 : (x >> i);
    return low | (high << (i - 1));
}

/// Opens a gap at bit i and writes v there.
inline BasisString insert(BasisString x, int i, int v) {
    const BasisString low = x & mask(i - 1);
    const BasisString high = x >> (i - 1);
    return low | (static_cast<BasisString>(v) << (i - 1)) | (high << i);
}

inline std::string to_string(BasisString x, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int i = 1; i <= n; ++i)
        if (get(x, i)) s[static_cast<std::size_t>(i - 1)] = '1';
    return s;
}

inline BasisString from_string(std::string_view s) {
    if (s.size() > kMaxQubits) throw std::invalid_argument("basis string longer than 64 qubits");
    BasisString x = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1') x |= BasisString{1} << i;
        else if (s[i] != '0') throw std::invalid_argument("basis string must contain only '0' and '1'");
    }
    return x;
}

inline int parity(BasisString x) { return __builtin_popcountll(x) & 1; }

}  // namespace qbits

struct BasisPair {
    BasisString x = 0;
    BasisString y = 0;
    friend bool operator==(const BasisPair&, const BasisPair&) = default;
};

struct BasisPairHash {
    std::size_t operator()(const BasisPair& p) const noexcept {
        std::uint64_t h = p.x * 0x9e3779b97f4a7c15ULL;
        h ^= p.y + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

class SparseDensityOperator {
public:
    using EntryMap = std::unordered_map<BasisPair, Complex, BasisPairHash>;

    explicit SparseDensityOperator(int n = 0) : n_(n) {
        if (n < 0 || n > kMaxQubits) throw std::invalid_argument("SparseDensityOperator: qubit count out of range");
    }

    int num_qubits() const noexcept { return n_; }
    const EntryMap& entries() const noexcept { return entries_; }
    std::size_t nnz() const noexcept { return entries_.size(); }

    Complex at(BasisString x, BasisString y) const {
        auto it = entries_.find({x, y});
        return it == entries_.end() ? Complex{} : it->second;
    }

    void add(BasisString x, BasisString y, Complex c) {
        const BasisString m = qbits::mask(n_);
        if ((x & ~m) || (y & ~m)) throw std::out_of_range("SparseDensityOperator::add: basis string wider than n");
        entries_[{x, y}] += c;
    }

    Complex trace() const {
        Complex tr{};
        for (const auto& [k, v] : entries_)
            if (k.x == k.y) tr += v;
        return tr;
    }

    /// Exact check: every stored (x, y) has its conjugate partner at (y, x).
    bool is_hermitian() const {
        for (const auto& [k, v] : entries_)
            if (at(k.y, k.x) != std::conj(v)) return false;
        return true;
    }

    /// Drops entries below the pruning threshold and restores exact
    /// Hermitian symmetry lost to rounding.
    void canonicalize(double tol = kPruneTolerance) {
        EntryMap out;
        out.reserve(entries_.size());
        for (const auto& [k, v] : entries_) {
            if (k.x > k.y) continue;
            if (k.x == k.y) {
                if (std::abs(v.real()) > tol) out[k] = Complex{v.real(), 0.0};
                continue;
            }
            const Complex avg = 0.5 * (v + std::conj(at(k.y, k.x)));
            if (std::abs(avg) > tol) {
                out[k] = avg;
                out[{k.y, k.x}] = std::conj(avg);
            }
        }
        for (const auto& [k, v] : entries_) {
            if (k.x <= k.y || entries_.count({k.y, k.x})) continue;
            const Complex avg = 0.5 * std::conj(v);
            if (std::abs(avg) > tol) {
                out[{k.y, k.x}] = avg;
                out[k] = std::conj(avg);
            }
        }
        entries_ = std::move(out);
    }

    void scale(double s) {
        for (auto& [k, v] : entries_) v *= s;
    }

    /// Entries sorted by (x, y) for deterministic output.
    std::vector<std::pair<BasisPair, Complex>> sorted_entries() const {
        std::vector<std::pair<BasisPair, Complex>> v(entries_.begin(), entries_.end());
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            return a.first.x != b.first.x ? a.first.x < b.first.x : a.first.y < b.first.y;
        });
        return v;
    }

private:
    int n_;
    EntryMap entries_;
};

/// Largest entrywise difference between two operators on the same qubits.
inline double max_abs_diff(const SparseDensityOperator& a, const SparseDensityOperator& b) {
    if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("max_abs_diff: qubit count mismatch");
    double d = 0.0;
    for (const auto& [k, v] : a.entries()) d = std::max(d, std::abs(v - b.at(k.x, k.y)));
    for (const auto& [k, v] : b.entries())
        if (!a.entries().count(k)) d = std::max(d, std::abs(v));
    return d;
}

/// A normalized pure state as a sparse amplitude vector.
class PureState {
public:
    using AmplitudeMap = std::unordered_map<BasisString, Complex>;

    PureState() = default;

    PureState(int n, AmplitudeMap amps) : n_(n), amps_(std::move(amps)) {
        if (n < 0 || n > kMaxQubits) throw std::invalid_argument("PureState: qubit count out of range");
        const BasisString m = qbits::mask(n);
        double norm2 = 0.0;
        for (const auto& [x, a] : amps_) {
            if (x & ~m) throw std::out_of_range("PureState: basis string wider than n");
            norm2 += std::norm(a);
        }
        if (!(norm2 > 0.0)) throw std::invalid_argument("PureState: zero vector");
        const double s = 1.0 / std::sqrt(norm2);
        for (auto& [x, a] : amps_) a *= s;
        std::erase_if(amps_, [](const auto& kv) { return std::abs(kv.second) <= kPruneTolerance; });
    }

    int num_qubits() const noexcept { return n_; }
    const AmplitudeMap& amplitudes() const noexcept { return amps_; }

    Complex amplitude(BasisString x) const {
        auto it = amps_.find(x);
        return it == amps_.end() ? Complex{} : it->second;
    }

    SparseDensityOperator density() const {
        SparseDensityOperator rho(n_);
        for (const auto& [x, a] : amps_)
            for (const auto& [y, b] : amps_) rho.add(x, y, a * std::conj(b));
        rho.canonicalize();
        return rho;
    }

private:
    int n_ = 0;
    AmplitudeMap amps_;
};

/// Pure state from a map of bitstring -> amplitude; normalizes.
inline PureState make_pure(const std::map<std::string, Complex>& amps) {
    if (amps.empty()) throw std::invalid_argument("make_pure: zero vector");
    const int n = static_cast<int>(amps.begin()->first.size());
    PureState::AmplitudeMap m;
    for (const auto& [s, a] : amps) {
        if (static_cast<int>(s.size()) != n) throw std::invalid_argument("make_pure: strings of different lengths");
        m[qbits::from_string(s)] += a;
    }
    return PureState(n, std::move(m));
}

inline SparseDensityOperator make_state(const std::map<std::string, Complex>& amps) {
    return make_pure(amps).density();
}

inline SparseDensityOperator ket(std::string_view x) {
    SparseDensityOperator rho(static_cast<int>(x.size()));
    const auto b = qbits::from_string(x);
    rho.add(b, b, 1.0);
    return rho;
}

/// A single-qubit density matrix [[m00, m01], [m10, m11]].
struct QubitState {
    std::array<Complex, 4> m{1.0, 0.0, 0.0, 0.0};

    Complex operator()(int a, int b) const { return m[static_cast<std::size_t>(2 * a + b)]; }

    static QubitState pure(Complex a0, Complex a1) {
        const double n2 = std::norm(a0) + std::norm(a1);
        if (!(n2 > 0.0)) throw std::invalid_argument("QubitState: zero vector");
        const double s = 1.0 / n2;
        return {{s * a0 * std::conj(a0), s * a0 * std::conj(a1), s * a1 * std::conj(a0), s * a1 * std::conj(a1)}};
    }
    static QubitState zero() { return pure(1.0, 0.0); }
    static QubitState one() { return pure(0.0, 1.0); }
    static QubitState plus() { return pure(1.0, 1.0); }
    static QubitState minus() { return pure(1.0, -1.0); }
    static QubitState maximally_mixed() { return {{0.5, 0.0, 0.0, 0.5}}; }

    /// Convex combination sum_k w_k s_k; weights must be nonnegative and sum to 1.
    static QubitState mixture(std::span<const double> weights, std::span<const QubitState> states) {
        if (weights.size() != states.size() || weights.empty())
            throw std::invalid_argument("QubitState::mixture: weight/state count mismatch");
        double total = 0.0;
        QubitState out{{0.0, 0.0, 0.0, 0.0}};
        for (std::size_t k = 0; k < weights.size(); ++k) {
            if (weights[k] < 0.0) throw std::invalid_argument("QubitState::mixture: negative weight");
            total += weights[k];
            for (std::size_t i = 0; i < 4; ++i) out.m[i] += weights[k] * states[k].m[i];
        }
        if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("QubitState::mixture: weights must sum to 1");
        out.validate();
        return out;
    }

    void validate(double tol = 1e-12) const {
        if (std::abs(m[0] + m[3] - 1.0) > tol) throw std::invalid_argument("QubitState: trace != 1");
        if (std::abs(m[1] - std::conj(m[2])) > tol || std::abs(m[0].imag()) > tol || std::abs(m[3].imag()) > tol)
            throw std::invalid_argument("QubitState: not Hermitian");
        const double det = m[0].real() * m[3].real() - std::norm(m[1]);
        if (det < -tol || m[0].real() < -tol || m[3].real() < -tol)
            throw std::invalid_argument("QubitState: not positive semidefinite");
    }
};

/// tr_i: discards qubit i (1-based).
inline SparseDensityOperator partial_trace(const SparseDensityOperator& rho, int i) {
    const int n = rho.num_qubits();
    if (i < 1 || i > n) throw std::out_of_range("partial_trace: qubit index out of range");
    SparseDensityOperator out(n - 1);
    for (const auto& [k, v] : rho.entries())
        if (qbits::get(k.x, i) == qbits::get(k.y, i)) out.add(qbits::remove(k.x, i), qbits::remove(k.y, i), v);
    out.canonicalize();
    return out;
}

/// Traces out every qubit in J, highest index first.
inline SparseDensityOperator quantum_delete(const SparseDensityOperator& rho, std::vector<int> J) {
    std::sort(J.begin(), J.end());
    if (std::adjacent_find(J.begin(), J.end()) != J.end())
        throw std::invalid_argument("quantum_delete: repeated position");
    for (int j : J)
        if (j < 1 || j > rho.num_qubits()) throw std::out_of_range("quantum_delete: position out of range");
    SparseDensityOperator out = rho;
    for (auto it = J.rbegin(); it != J.rend(); ++it) out = partial_trace(out, *it);
    return out;
}

/// Tensors `inserted[k]` in so that it occupies position K[k] of the output.
/// The result deletes back to rho at K.
inline SparseDensityOperator quantum_insert(const SparseDensityOperator& rho, std::vector<int> K,
                                            std::vector<QubitState> inserted) {
    if (K.size() != inserted.size()) throw std::invalid_argument("quantum_insert: one state per position required");
    const int n_out = rho.num_qubits() + static_cast<int>(K.size());
    if (n_out > kMaxQubits) throw std::invalid_argument("quantum_insert: too many qubits");
    std::vector<std::size_t> order(K.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return K[a] < K[b]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int k = K[order[i]];
        if (k < 1 || k > n_out) throw std::out_of_range("quantum_insert: position out of range");
        if (i && k == K[order[i - 1]]) throw std::invalid_argument("quantum_insert: repeated position");
        inserted[order[i]].validate();
    }

    SparseDensityOperator cur = rho;
    for (std::size_t idx : order) {
        const int k = K[idx];
        const auto& q = inserted[idx];
        SparseDensityOperator next(cur.num_qubits() + 1);
        for (const auto& [key, v] : cur.entries())
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const Complex c = q(a, b);
                    if (c == Complex{}) continue;
                    next.add(qbits::insert(key.x, k, a), qbits::insert(key.y, k, b), v * c);
                }
        next.canonicalize();
        cur = std::move(next);
    }
    return cur;
}

/// Conjugation by U_tau: relabels every string so that x'_j = x_{tau(j)}.
inline SparseDensityOperator permute_qubits(const SparseDensityOperator& rho, const Permutation& tau) {
    const int n = rho.num_qubits();
    if (tau.size() != n) throw std::invalid_argument("permute_qubits: permutation size != qubit count");
    auto relabel = [&](BasisString x) {
        BasisString y = 0;
        for (int j = 1; j <= n; ++j)
            if (qbits::get(x, tau(j))) y |= BasisString{1} << (j - 1);
        return y;
    };
    SparseDensityOperator out(n);
    for (const auto& [k, v] : rho.entries()) out.add(relabel(k.x), relabel(k.y), v);
    return out;
}

struct MeasurementResult {
    int outcome = 0;
    double probability = 0.0;
    SparseDensityOperator state;
};

/// Probability of reading `outcome` on qubit i.
inline double outcome_probability(const SparseDensityOperator& rho, int i, int outcome) {
    if (i < 1 || i > rho.num_qubits()) throw std::out_of_range("measure_qubit: qubit index out of range");
    double p = 0.0;
    for (const auto& [k, v] : rho.entries())
        if (k.x == k.y && qbits::get(k.x, i) == outcome) p += v.real();
    return std::clamp(p, 0.0, 1.0);
}

/// Projects qubit i onto `outcome` and renormalizes. Throws if that outcome
/// has zero probability.
inline MeasurementResult measure_qubit_as(const SparseDensityOperator& rho, int i, int outcome) {
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("measure_qubit_as: outcome must be 0 or 1");
    const double p = outcome_probability(rho, i, outcome);
    if (p <= kPruneTolerance) throw std::domain_error("measure_qubit_as: zero-probability outcome");
    MeasurementResult r{outcome, p, SparseDensityOperator(rho.num_qubits())};
    for (const auto& [k, v] : rho.entries())
        if (qbits::get(k.x, i) == outcome && qbits::get(k.y, i) == outcome) r.state.add(k.x, k.y, v / p);
    r.state.canonicalize();
    return r;
}

/// Born-rule measurement driven by a uniform draw in [0, 1): outcome 0 iff
/// draw < P(0).
inline MeasurementResult measure_qubit(const SparseDensityOperator& rho, int i, double draw) {
    const double p0 = outcome_probability(rho, i, 0);
    return measure_qubit_as(rho, i, draw < p0 ? 0 : 1);
}

/// <phi| rho |phi>.
inline double fidelity(const SparseDensityOperator& rho, const PureState& phi) {
    if (rho.num_qubits() != phi.num_qubits()) throw std::invalid_argument("fidelity: qubit count mismatch");
    Complex f{};
    for (const auto& [k, v] : rho.entries()) f += std::conj(phi.amplitude(k.x)) * v * phi.amplitude(k.y);
    return f.real();
}

/// Dense copy restricted to the basis strings that occur in rho.
inline Eigen::MatrixXcd dense_on_support(const SparseDensityOperator& rho, std::vector<BasisString>* support = nullptr) {
    std::vector<BasisString> s;
    for (const auto& [k, v] : rho.entries()) {
        s.push_back(k.x);
        s.push_back(k.y);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.size() > 4096) throw std::length_error("dense_on_support: support too large for a dense check");
    std::unordered_map<BasisString, Eigen::Index> idx;
    for (std::size_t i = 0; i < s.size(); ++i) idx[s[i]] = static_cast<Eigen::Index>(i);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.size()));
    for (const auto& [k, v] : rho.entries()) m(idx[k.x], idx[k.y]) = v;
    if (support) *support = std::move(s);
    return m;
}

/// Eigenvalues in ascending order.
inline std::vector<double> spectrum(const SparseDensityOperator& rho) {
    const auto m = dense_on_support(rho);
    if (m.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

inline int rank(const SparseDensityOperator& rho, double tol = 1e-9) {
    const auto ev = spectrum(rho);
    return static_cast<int>(std::count_if(ev.begin(), ev.end(), [&](double e) { return e > tol; }));
}

/// Unit trace, exact Hermiticity, and (for small supports) no eigenvalue
/// below -tol.
inline bool is_valid_state(const SparseDensityOperator& rho, double tol = 1e-9) {
    if (std::abs(rho.trace() - 1.0) > tol || !rho.is_hermitian()) return false;
    const auto ev = spectrum(rho);
    return ev.empty() || ev.front() > -tol;
}

}  // namespace msync
