#pragma once

// Qubit-shuffle permutations and their decomposition into permutations with
// contiguous, pairwise disjoint supports.
//
// Convention: image[i-1] = tau(i), and relabeling a string x by tau gives
// x' with x'_i = x_{tau(i)}. Under this convention the output of a
// delete-at-P / insert-at-Q channel equals the delete-at-P / insert-at-P
// output relabeled by build_tau(P, Q, n).

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace msync {

class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
        std::vector<char> seen(image_.size() + 1, 0);
        for (int v : image_) {
            if (v < 1 || v > size() || seen[static_cast<std::size_t>(v)])
                throw std::invalid_argument("Permutation: image is not a bijection on [n]");
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }

    static Permutation identity(int n) {
        std::vector<int> img(static_cast<std::size_t>(n));
        std::iota(img.begin(), img.end(), 1);
        return Permutation(std::move(img));
    }

    int size() const noexcept { return static_cast<int>(image_.size()); }
    int operator()(int i) const { return image_.at(static_cast<std::size_t>(i - 1)); }
    const std::vector<int>& image() const noexcept { return image_; }

    Permutation inverse() const {
        std::vector<int> inv(image_.size());
        for (int i = 1; i <= size(); ++i) inv[static_cast<std::size_t>((*this)(i) - 1)] = i;
        return Permutation(std::move(inv));
    }

    /// (this o other)(i) = this(other(i)).
    Permutation compose(const Permutation& other) const {
        if (other.size() != size()) throw std::invalid_argument("Permutation::compose: size mismatch");
        std::vector<int> out(image_.size());
        for (int i = 1; i <= size(); ++i) out[static_cast<std::size_t>(i - 1)] = (*this)(other(i));
        return Permutation(std::move(out));
    }

    bool is_identity() const {
        for (int i = 1; i <= size(); ++i)
            if ((*this)(i) != i) return false;
        return true;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> image_;
};

/// Inclusive integer interval [lo, hi].
struct Interval {
    int lo = 1;
    int hi = 0;

    int size() const noexcept { return hi - lo + 1; }
    bool empty() const noexcept { return hi < lo; }
    bool contains(int x) const noexcept { return lo <= x && x <= hi; }
    bool overlaps(const Interval& o) const noexcept { return !empty() && !o.empty() && lo <= o.hi && o.lo <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Restriction of tau to an invariant interval S, stored 1-based on S's own
/// coordinates: local image[i-1] = tau(lo + i - 1).
struct LocalPermutation {
    Interval support;
    std::vector<int> image;  // values in [lo, hi]
};

struct SupportDecomposition {
    int k = 0;
    std::vector<Interval> intervals;
    std::vector<LocalPermutation> parts;  // filled by decompose()
};

namespace detail {
inline void require_sorted_subset(const std::vector<int>& s, int n, const char* what) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 1 || s[i] > n) throw std::out_of_range(std::string(what) + ": position out of range");
        if (i && s[i] <= s[i - 1]) throw std::invalid_argument(std::string(what) + ": positions must be increasing");
    }
}
}  // namespace detail

/// The shuffle relating insertions at P and at Q after deleting P:
/// tau(q_i) = p_i, and tau is increasing on [n] \ Q.
inline Permutation build_tau(const std::vector<int>& P, const std::vector<int>& Q, int n) {
    if (P.size() != Q.size()) throw std::invalid_argument("build_tau: |P| != |Q|");
    detail::require_sorted_subset(P, n, "build_tau");
    detail::require_sorted_subset(Q, n, "build_tau");
    std::vector<int> img(static_cast<std::size_t>(n), 0);
    std::vector<char> in_p(static_cast<std::size_t>(n) + 1, 0), in_q(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t i = 0; i < P.size(); ++i) {
        img[static_cast<std::size_t>(Q[i] - 1)] = P[i];
        in_p[static_cast<std::size_t>(P[i])] = 1;
        in_q[static_cast<std::size_t>(Q[i])] = 1;
    }
    int next = 1;
    for (int i = 1; i <= n; ++i) {
        if (in_q[static_cast<std::size_t>(i)]) continue;
        while (in_p[static_cast<std::size_t>(next)]) ++next;
        img[static_cast<std::size_t>(i - 1)] = next++;
    }
    return Permutation(std::move(img));
}

/// Intervals T_j spanning p_j and q_j, with overlapping consecutive ones
/// merged in a single left-to-right sweep.
inline SupportDecomposition algorithm2(const std::vector<int>& P, const std::vector<int>& Q) {
    if (P.size() != Q.size()) throw std::invalid_argument("algorithm2: |P| != |Q|");
    const std::size_t t = P.size();
    std::vector<Interval> T(t);
    for (std::size_t j = 0; j < t; ++j)
        T[j] = P[j] != Q[j] ? Interval{std::min(P[j], Q[j]), std::max(P[j], Q[j])} : Interval{1, 0};

    SupportDecomposition out;
    for (std::size_t j = 0; j + 1 < t; ++j) {
        if (T[j].overlaps(T[j + 1])) {
            T[j + 1] = Interval{std::min(T[j].lo, T[j + 1].lo), std::max(T[j].hi, T[j + 1].hi)};
            T[j] = Interval{1, 0};
        } else if (!T[j].empty()) {
            out.intervals.push_back(T[j]);
        }
    }
    if (t > 0 && !T[t - 1].empty()) out.intervals.push_back(T[t - 1]);
    out.k = static_cast<int>(out.intervals.size());
    return out;
}

/// tau restricted to S; throws if tau does not map S onto itself.
inline LocalPermutation restrict(const Permutation& tau, const Interval& S) {
    if (S.empty() || S.lo < 1 || S.hi > tau.size()) throw std::out_of_range("restrict: interval outside [n]");
    LocalPermutation lp{S, {}};
    for (int i = S.lo; i <= S.hi; ++i) {
        const int v = tau(i);
        if (!S.contains(v)) throw std::invalid_argument("restrict: interval is not invariant under tau");
        lp.image.push_back(v);
    }
    return lp;
}

/// Extends a local permutation by the identity outside its support.
inline Permutation embed(const LocalPermutation& lp, int n) {
    auto img = Permutation::identity(n).image();
    for (int i = lp.support.lo; i <= lp.support.hi; ++i)
        img[static_cast<std::size_t>(i - 1)] = lp.image[static_cast<std::size_t>(i - lp.support.lo)];
    return Permutation(std::move(img));
}

/// algorithm2 plus the restricted permutation on every interval.
inline SupportDecomposition decompose(const Permutation& tau, const std::vector<int>& P, const std::vector<int>& Q) {
    auto d = algorithm2(P, Q);
    for (const auto& S : d.intervals) d.parts.push_back(restrict(tau, S));
    return d;
}

/// tau_1 o tau_2 o ... o tau_k, each extended by the identity.
inline Permutation recompose(const SupportDecomposition& d, int n) {
    auto acc = Permutation::identity(n);
    for (const auto& part : d.parts) acc = acc.compose(embed(part, n));
    return acc;
}

}  // namespace msync
