#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "msync/gf2e.hpp"
#include "msync/rs_code.hpp"

using namespace msync;

namespace {

// Shift-and-add product modulo the field polynomial, independent of the
// log/antilog tables.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, int E, std::uint32_t poly) {
    std::uint32_t acc = 0;
    while (b) {
        if (b & 1u) acc ^= a;
        b >>= 1;
        a <<= 1;
        if (a & (1u << E)) a ^= poly;
    }
    return acc;
}

int slow_trace(std::uint32_t beta, int E, std::uint32_t poly) {
    std::uint32_t acc = 0, p = beta;
    for (int i = 0; i < E; ++i) {
        acc ^= p;
        p = slow_mul(p, p, E, poly);
    }
    EXPECT_LE(acc, 1u) << "trace must land in GF(2)";
    return static_cast<int>(acc);
}

std::vector<Bits> binary_dual(const std::vector<Bits>& code, int len) {
    std::vector<Bits> out;
    for (std::uint32_t v = 0; v < (1u << len); ++v) {
        Bits w(static_cast<std::size_t>(len));
        for (int i = 0; i < len; ++i) w[static_cast<std::size_t>(i)] = (v >> i) & 1u;
        bool orth = true;
        for (const auto& c : code) {
            int dot = 0;
            for (int i = 0; i < len; ++i) dot ^= c[static_cast<std::size_t>(i)] & w[static_cast<std::size_t>(i)];
            if (dot) {
                orth = false;
                break;
            }
        }
        if (orth) out.push_back(w);
    }
    return out;
}

}  // namespace

TEST(FieldTable, AdditionIsXor) {
    FieldTable f3(3);
    FieldElement a(f3, 0x6), b(f3, 0x3);
    EXPECT_EQ((a + b).value(), 0x5u);
    FieldTable f4(4);
    EXPECT_EQ((FieldElement(f4, 0x3) + FieldElement(f4, 0x3)).value(), 0x0u);
    EXPECT_EQ((FieldElement(f4, 0x5) + FieldElement(f4, 0x0)).value(), 0x5u);
}

TEST(FieldTable, MismatchedTablesRejected) {
    FieldTable f2(2), f3(3);
    EXPECT_THROW(FieldElement(f2, 1) + FieldElement(f3, 1), std::invalid_argument);
    EXPECT_THROW(FieldElement(f2, 1) * FieldElement(f3, 1), std::invalid_argument);
}

TEST(FieldTable, SmallProducts) {
    FieldTable f(2);
    EXPECT_EQ(f.poly(), 0x7u);
    EXPECT_EQ(f.mul(0x2, 0x2), 0x3u);
    for (Symbol a = 0; a < 4; ++a) EXPECT_EQ(f.mul(a, 1), a);
}

TEST(FieldTable, InverseLawAllDegrees) {
    for (int E = 1; E <= 10; ++E) {
        FieldTable f(E);
        for (Symbol a = 1; a < f.size(); ++a) ASSERT_EQ(f.mul(a, f.inv(a)), 1u) << "E=" << E << " a=" << a;
        EXPECT_THROW(f.inv(0), std::domain_error);
    }
}

TEST(FieldTable, AxiomsExhaustiveUpToDegreeFour) {
    for (int E = 1; E <= 4; ++E) {
        FieldTable f(E);
        const Symbol q = f.size();
        for (Symbol a = 0; a < q; ++a)
            for (Symbol b = 0; b < q; ++b) {
                ASSERT_EQ(f.mul(a, b), slow_mul(a, b, E, f.poly()));
                ASSERT_EQ(f.mul(a, b), f.mul(b, a));
                for (Symbol c = 0; c < q; ++c) {
                    ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
    }
}

TEST(FieldTable, ProductsMatchReferenceUpToDegreeEight) {
    for (int E = 5; E <= 8; ++E) {
        FieldTable f(E);
        for (Symbol a = 0; a < f.size(); a += 3)
            for (Symbol b = 0; b < f.size(); ++b) ASSERT_EQ(f.mul(a, b), slow_mul(a, b, E, f.poly()));
    }
}

TEST(FieldTable, PowAndExponents) {
    FieldTable f(4);
    for (Symbol a = 1; a < f.size(); ++a) {
        EXPECT_EQ(f.pow(a, 0), 1u);
        EXPECT_EQ(f.pow(a, static_cast<long long>(f.order())), 1u);
        EXPECT_EQ(f.pow(a, -1), f.inv(a));
        EXPECT_EQ(f.exp(f.log(a)), a);
    }
    EXPECT_EQ(f.pow(0, 3), 0u);
}

TEST(FieldTable, RejectsNonPrimitivePolynomials) {
    EXPECT_THROW(FieldTable(4, 0x1F), std::invalid_argument);  // x^4+x^3+x^2+x+1 has order 5
    EXPECT_THROW(FieldTable(4, 0x15), std::invalid_argument);  // reducible
    EXPECT_THROW(FieldTable(0), std::invalid_argument);
    EXPECT_NO_THROW(FieldTable(4, 0x19));
}

TEST(Trace, SmallValues) {
    FieldTable f(2);
    EXPECT_EQ(f.trace(0), 0);
    EXPECT_EQ(f.trace(0x1), 0);
    EXPECT_EQ(f.trace(0x2), 1);
    EXPECT_EQ(f.trace(0x3), 1);
}

TEST(Trace, BalancedLinearAndMatchesFrobeniusSum) {
    for (int E = 1; E <= 8; ++E) {
        FieldTable f(E);
        int ones = 0;
        for (Symbol a = 0; a < f.size(); ++a) {
            ones += f.trace(a);
            ASSERT_EQ(f.trace(a), slow_trace(a, E, f.poly()));
        }
        EXPECT_EQ(ones, 1 << (E - 1)) << "E=" << E;
        if (E <= 4) {
            for (Symbol a = 0; a < f.size(); ++a)
                for (Symbol b = 0; b < f.size(); ++b) ASSERT_EQ(f.trace(a ^ b), f.trace(a) ^ f.trace(b));
        }
    }
}

TEST(Basis, DualOfDualIsOriginal) {
    for (int E = 1; E <= 6; ++E) {
        FieldTable f(E);
        std::vector<Symbol> poly_basis;
        for (int i = 0; i < E; ++i) poly_basis.push_back(1u << i);
        const auto B = make_basis(f, poly_basis);
        const auto D = dual_basis(f, B);
        for (int i = 0; i < E; ++i)
            for (int j = 0; j < E; ++j)
                ASSERT_EQ(f.trace(f.mul(B.elements[static_cast<std::size_t>(i)], D.elements[static_cast<std::size_t>(j)])),
                          i == j ? 1 : 0);
        EXPECT_EQ(dual_basis(f, D).elements, B.elements);
    }
}

TEST(Basis, SmallSelfDualCases) {
    FieldTable f1(1);
    EXPECT_EQ(dual_basis(f1, make_basis(f1, {1})).elements, std::vector<Symbol>{1});
    EXPECT_EQ(find_self_dual_basis(f1).elements, std::vector<Symbol>{1});

    FieldTable f2(2);
    const Symbol omega = 0x2, omega2 = f2.mul(omega, omega);
    const auto B = make_basis(f2, {omega, omega2});
    EXPECT_TRUE(B.self_dual);
    EXPECT_EQ(dual_basis(f2, B).elements, B.elements);
    EXPECT_EQ(find_self_dual_basis(f2).elements, (std::vector<Symbol>{0x2, 0x3}));
}

TEST(Basis, RejectsDependentElements) {
    FieldTable f(3);
    EXPECT_THROW(make_basis(f, {1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(make_basis(f, {1, 2}), std::invalid_argument);
    EXPECT_FALSE(is_basis(f, std::vector<Symbol>{0, 1, 2}));
}

TEST(Basis, SelfDualSearchSatisfiesTraceIdentities) {
    for (int E = 1; E <= 8; ++E) {
        FieldTable f(E);
        const auto B = find_self_dual_basis(f);
        ASSERT_EQ(static_cast<int>(B.size()), E);
        EXPECT_TRUE(B.self_dual);
        for (int i = 0; i < E; ++i)
            for (int j = 0; j < E; ++j)
                ASSERT_EQ(slow_trace(slow_mul(B.elements[static_cast<std::size_t>(i)], B.elements[static_cast<std::size_t>(j)], E, f.poly()),
                                     E, f.poly()),
                          i == j ? 1 : 0)
                    << "E=" << E;
    }
}

TEST(Expansion, OneInTheSmallSelfDualBasis) {
    FieldTable f(2);
    BasisExpansion ex(f, find_self_dual_basis(f));
    EXPECT_EQ(ex.expand(1), (Bits{1, 1}));
    EXPECT_EQ(ex.expand(0), (Bits{0, 0}));
    EXPECT_EQ(ex.expand(0x2), (Bits{1, 0}));
}

TEST(Expansion, RoundTripEveryElement) {
    for (int E = 1; E <= 8; ++E) {
        FieldTable f(E);
        std::vector<Symbol> poly_basis;
        for (int i = 0; i < E; ++i) poly_basis.push_back(1u << i);
        for (const auto& B : {find_self_dual_basis(f), make_basis(f, poly_basis)}) {
            BasisExpansion ex(f, B);
            for (Symbol a = 0; a < f.size(); ++a) {
                const auto bits = ex.expand(a);
                ASSERT_EQ(static_cast<int>(bits.size()), E);
                ASSERT_EQ(ex.contract(bits), a);
                Symbol acc = 0;
                for (int i = 0; i < E; ++i)
                    if (bits[static_cast<std::size_t>(i)]) acc ^= B.elements[static_cast<std::size_t>(i)];
                ASSERT_EQ(acc, a) << "coordinates must reconstruct the element";
            }
        }
    }
}

TEST(Expansion, ContractRejectsWrongLength) {
    FieldTable f(3);
    BasisExpansion ex(f, find_self_dual_basis(f));
    EXPECT_THROW(ex.contract(Bits{1, 0}), std::invalid_argument);
    EXPECT_THROW(ex.contract_word(Bits{1, 0, 1, 1}), std::invalid_argument);
    EXPECT_THROW(ex.expand(8), std::out_of_range);
}

TEST(ExpandCode, ZeroAndInjective) {
    FieldTable f(2);
    BasisExpansion ex(f, find_self_dual_basis(f));
    const auto code = enumerate_codewords(RSCode::standard(f, 3, 2));
    const auto bin = expand_code(code, ex);
    EXPECT_EQ(bin.front(), Bits(6, 0));
    std::set<Bits> distinct(bin.begin(), bin.end());
    EXPECT_EQ(distinct.size(), code.size());
}

TEST(ExpandCode, BinaryImageOfDualIsBinaryDual) {
    struct Case {
        int E, N, K;
    };
    for (auto [E, N, K] : {Case{2, 3, 1}, Case{2, 3, 2}, Case{3, 4, 2}, Case{3, 4, 1}, Case{3, 3, 2}}) {
        FieldTable f(E);
        BasisExpansion ex(f, find_self_dual_basis(f));
        const auto C = RSCode::standard(f, N, K);
        auto lhs = expand_code(enumerate_codewords(dual_code(C)), ex);
        auto rhs = binary_dual(expand_code(enumerate_codewords(C), ex), N * E);
        std::sort(lhs.begin(), lhs.end());
        std::sort(rhs.begin(), rhs.end());
        EXPECT_EQ(lhs, rhs) << "E=" << E << " N=" << N << " K=" << K;
    }
}

TEST(ExpandCode, DualityNeedsSelfDualBasis) {
    FieldTable f(3);
    BasisExpansion ex(f, make_basis(f, {1, 2, 4}));
    ASSERT_FALSE(ex.basis().self_dual);
    const auto C = RSCode::standard(f, 4, 2);
    auto lhs = expand_code(enumerate_codewords(dual_code(C)), ex);
    auto rhs = binary_dual(expand_code(enumerate_codewords(C), ex), 12);
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    EXPECT_NE(lhs, rhs);
}
