#include <gtest/gtest.h>

#include <regex>
#include <string>

#include "msync/diagnostics.hpp"
#include "msync/experiment.hpp"

using namespace msync;

namespace {

struct RefStep {
    int branch;
    int w;
};

// Straight transcription of the scan on strings, kept separate from the
// library so that the two can be compared.
std::vector<RefStep> reference_scan(const std::string& y, const CodeParams& p, std::vector<std::string>& blocks) {
    const int n = p.N * (p.E + 2 * p.t);
    const int r = static_cast<int>(y.size()) - n;
    const int td = static_cast<int>(std::floor((p.t - r) / 2.0));
    const int ti = static_cast<int>(std::floor((p.t + r) / 2.0));
    std::vector<RefStep> out;
    int u = 0, v = 0;
    for (int b = 1; b <= p.N; ++b) {
        const int l = v - u;
        const int gamma = (b - 1) * (p.E + 2 * p.t) + p.E + p.t;
        const std::string win = y.substr(static_cast<std::size_t>(gamma - td), static_cast<std::size_t>(td + ti));
        const std::string want = std::string(static_cast<std::size_t>(td + l), '0') +
                                 std::string(static_cast<std::size_t>(ti - l), '1');
        std::smatch m;
        const std::regex mono("^(0*)1*$");
        if (win == want) {
            out.push_back({6, 0});
            blocks.push_back(y.substr(static_cast<std::size_t>((b - 1) * (p.E + 2 * p.t) + l), static_cast<std::size_t>(p.E)));
        } else if (std::regex_match(win, m, mono) && static_cast<int>(m[1].length()) < td + l) {
            const int w = td + l - static_cast<int>(m[1].length());
            out.push_back({8, w});
            blocks.push_back("?");
            u += w;
        } else {
            out.push_back({10, 0});
            blocks.push_back("?");
            v += 1;
        }
    }
    return out;
}

}  // namespace

TEST(Encode, SingleBlockExample) {
    const CodeParams p{2, 1, 1, 1, 2};
    EXPECT_EQ(to_string(encode_classical(std::vector<Bits>{bits_from_string("01")}, p)), "010011");
}

TEST(Encode, MarkerLayout) {
    const CodeParams p{3, 4, 2, 2, 2};
    const std::vector<Bits> blocks{bits_from_string("101"), bits_from_string("000"), bits_from_string("111"),
                                   bits_from_string("011")};
    EXPECT_EQ(to_string(encode_classical(blocks, p)), "1010011" "0000011" "1110011" "0110011");
    EXPECT_EQ(p.stride(), 7);
    EXPECT_EQ(p.codeword_length(), 28);
    EXPECT_EQ(p.last_marker_zero(2), 12);
    EXPECT_THROW(encode_classical(std::vector<Bits>{bits_from_string("10")}, p), std::invalid_argument);
}

TEST(Encode, MessageGoesThroughRSAndBasis) {
    const CodeParams p{2, 3, 1, 1, 2};
    FieldTable f(2);
    BasisExpansion ex(f, find_self_dual_basis(f));
    const auto C = RSCode::standard(f, 3, 1);
    // Constant codeword (1, 1, 1); 1 = b1 + b2 in the basis {2, 3}.
    EXPECT_EQ(to_string(encode_message(SymbolWord{1}, C, ex, p)), "110011" "110011" "110011");
}

TEST(Params, Validation) {
    EXPECT_THROW((CodeParams{0, 3, 1, 1, 2}).validate_layout(), std::invalid_argument);
    EXPECT_THROW((CodeParams{2, 0, 1, 1, 2}).validate_layout(), std::invalid_argument);
    EXPECT_THROW((CodeParams{2, 3, 1, 1, 0}).validate_layout(), std::invalid_argument);
    EXPECT_THROW((CodeParams{2, 4, 1, 1, 2}).validate_classical(), std::invalid_argument);
    EXPECT_THROW((CodeParams{2, 3, 2, 1, 2}).validate_classical(), std::invalid_argument);
    EXPECT_NO_THROW((CodeParams{2, 3, 1, 1, 2}).validate_classical());
    EXPECT_THROW((CodeParams{3, 5, 3, 1, 2}).validate_quantum(), std::invalid_argument);
    EXPECT_NO_THROW((CodeParams{3, 5, 3, 2, 2}).validate_quantum());
}

TEST(ShiftBudget, FloorsForNegativeShift) {
    const CodeParams p{2, 3, 1, 1, 3};
    const int n = p.codeword_length();
    auto s = shift_budget(p, n - 1);
    EXPECT_EQ(s.r, -1);
    EXPECT_EQ(s.tau_d, 2);
    EXPECT_EQ(s.tau_i, 1);
    s = shift_budget(p, n);
    EXPECT_EQ(s.tau_d, 1);
    EXPECT_EQ(s.tau_i, 1);
    s = shift_budget(p, n + 2);
    EXPECT_EQ(s.tau_d, 0);
    EXPECT_EQ(s.tau_i, 2);
    s = shift_budget(p, n - 4);
    EXPECT_EQ(s.tau_i, -1);
}

TEST(Branch, CaseTable) {
    const ShiftBudget s{0, 2, 2};
    auto d = decide_branch(bits_from_string("0011"), 0, s);
    EXPECT_EQ(d.branch, Branch::copy);
    d = decide_branch(bits_from_string("0111"), 0, s);
    EXPECT_EQ(d.branch, Branch::deletion);
    EXPECT_EQ(d.w, 1);
    d = decide_branch(bits_from_string("1111"), 0, s);
    EXPECT_EQ(d.branch, Branch::deletion);
    EXPECT_EQ(d.w, 2);
    EXPECT_EQ(decide_branch(bits_from_string("0001"), 0, s).branch, Branch::insertion);
    EXPECT_EQ(decide_branch(bits_from_string("0101"), 0, s).branch, Branch::insertion);
    EXPECT_EQ(decide_branch(bits_from_string("0001"), 1, s).branch, Branch::copy);
    EXPECT_EQ(decide_branch(bits_from_string("0011"), 1, s).branch, Branch::deletion);
}

// Stride 11, length 55: deletions at 23 and 34, insertions at 2 and 35 of
// the received word.
TEST(WorkedExample, WindowsBranchesAndClassification) {
    const CodeParams p{3, 5, 1, 1, 4};
    FieldTable f(3);
    BasisExpansion ex(f, find_self_dual_basis(f));
    const auto C = RSCode::standard(f, 5, 1);
    const Bits c = encode_message(SymbolWord{3}, C, ex, p);
    const ErrorPattern pat{{23, 34}, {2, 35}, Bits{1, 1}};
    const Bits y = transmit(c, pat);
    ASSERT_EQ(y.size(), 55u);

    const auto scan = algorithm1(y, p);
    ASSERT_TRUE(scan.ok());
    EXPECT_EQ(scan.budget.tau_d, 2);
    EXPECT_EQ(scan.budget.tau_i, 2);
    const std::vector<std::string> windows{"0001", "0001", "0011", "0011", "0011"};
    const std::vector<Branch> branches{Branch::insertion, Branch::copy, Branch::deletion, Branch::copy, Branch::copy};
    for (std::size_t b = 0; b < 5; ++b) {
        EXPECT_EQ(to_string(scan.trace[b].window), windows[b]) << "block " << b + 1;
        EXPECT_EQ(scan.trace[b].branch, branches[b]) << "block " << b + 1;
    }
    EXPECT_EQ(scan.trace[2].w, 1);
    EXPECT_EQ(scan.erased, (std::vector<int>{1, 3}));

    const auto d = classify_blocks(c, y, pat, p);
    EXPECT_EQ(d.P_e, (std::vector<int>{1, 3}));
    EXPECT_EQ(d.P_s, (std::vector<int>{4}));
    EXPECT_EQ(d.Q_I, (std::vector<int>{1}));
    EXPECT_EQ(d.Q_D, (std::vector<int>{3}));
    EXPECT_TRUE(audit(d, c, y).empty());

    const auto out = decode(y, p, C, ex);
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(*out.message, SymbolWord{3});
    EXPECT_EQ(out.rs.errors_corrected, 1);
}

TEST(Decode, ErrorFreeWordIsCopied) {
    const CodeParams p{4, 10, 6, 6, 4};
    FieldTable f(4);
    BasisExpansion ex(f, find_self_dual_basis(f));
    const auto C = RSCode::standard(f, 10, 6);
    const SymbolWord msg{9, 8, 7, 6, 5, 4};
    const auto out = decode(encode_message(msg, C, ex, p), p, C, ex);
    ASSERT_TRUE(out.ok());
    EXPECT_TRUE(out.scan.erased.empty());
    EXPECT_EQ(*out.message, msg);
    for (const auto& s : out.scan.trace) EXPECT_EQ(s.branch, Branch::copy);
}

TEST(Decode, OnlyDeletionsOrOnlyInsertionsStillDecode) {
    const CodeParams p{4, 10, 6, 6, 4};
    FieldTable f(4);
    BasisExpansion ex(f, find_self_dual_basis(f));
    const auto C = RSCode::standard(f, 10, 6);
    Rng rng(17);
    for (int trial = 0; trial < 400; ++trial) {
        SymbolWord msg(6);
        for (auto& s : msg) s = static_cast<Symbol>(uniform_below(rng, 16));
        const Bits c = encode_message(msg, C, ex, p);
        const int k = 1 + static_cast<int>(uniform_below(rng, 4));
        const bool del = trial % 2 == 0;
        const auto pat = sample_composite(rng(), static_cast<int>(c.size()), del ? k : 0, del ? 0 : k);
        const auto out = decode(transmit(c, pat), p, C, ex);
        ASSERT_TRUE(out.ok()) << trial;
        ASSERT_EQ(*out.message, msg);
    }
}

TEST(Decode, MalformedLengthsAreReported) {
    const CodeParams p{2, 3, 1, 1, 2};
    FieldTable f(2);
    BasisExpansion ex(f, find_self_dual_basis(f));
    const auto C = RSCode::standard(f, 3, 1);
    const Bits c = encode_message(SymbolWord{2}, C, ex, p);
    Bits longer = c;
    longer.insert(longer.end(), 3, 0);
    auto out = decode(longer, p, C, ex);
    EXPECT_EQ(out.status, DecodeStatus::malformed_input);
    Bits shorter(c.begin(), c.end() - 3);
    out = decode(shorter, p, C, ex);
    EXPECT_EQ(out.status, DecodeStatus::malformed_input);
    EXPECT_FALSE(out.ok());
}

TEST(Decode, MatchesReferenceScan) {
    Rng rng(99);
    for (const CodeParams p : {CodeParams{2, 3, 1, 1, 2}, CodeParams{3, 7, 3, 3, 4}, CodeParams{4, 10, 6, 6, 4}}) {
        FieldTable f(p.E);
        BasisExpansion ex(f, find_self_dual_basis(f));
        const auto C = RSCode::standard(f, p.N, p.K1);
        for (int trial = 0; trial < 3000; ++trial) {
            SymbolWord msg(static_cast<std::size_t>(p.K1));
            for (auto& s : msg) s = static_cast<Symbol>(uniform_below(rng, f.size()));
            const Bits c = encode_message(msg, C, ex, p);
            const int td = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(p.t + 1)));
            const int ti = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(p.t - td + 1)));
            const auto pat = sample_composite(rng(), static_cast<int>(c.size()), td, ti);
            const Bits y = transmit(c, pat);
            const auto scan = algorithm1(y, p);
            ASSERT_TRUE(scan.ok());
            std::vector<std::string> ref_blocks;
            const auto ref = reference_scan(to_string(y), p, ref_blocks);
            for (int b = 0; b < p.N; ++b) {
                const auto i = static_cast<std::size_t>(b);
                ASSERT_EQ(static_cast<int>(scan.trace[i].branch), ref[i].branch);
                ASSERT_EQ(scan.trace[i].w, ref[i].w);
                ASSERT_EQ(scan.z[i] ? to_string(*scan.z[i]) : std::string("?"), ref_blocks[i]);
            }
            const auto out = decode(y, p, C, ex);
            ASSERT_TRUE(out.ok()) << to_string(c) << " -> " << to_string(y);
            ASSERT_EQ(*out.message, msg);
        }
    }
}

TEST(Diagnostics, RequiresBothErrorKinds) {
    const CodeParams p{2, 3, 1, 1, 3};
    const Bits c = encode_classical(std::vector<Bits>(3, Bits{0, 1}), p);
    const ErrorPattern only_del{{2}, {}, {}};
    EXPECT_THROW(classify_blocks(c, transmit(c, only_del), only_del, p), std::domain_error);
    const ErrorPattern too_many{{1, 2}, {1, 2}, {0, 0}};
    EXPECT_THROW(classify_blocks(c, transmit(c, too_many), too_many, p), std::domain_error);
}

TEST(Audit, ExhaustiveT2) {
    const auto rep = exhaustive_audit(CodeParams{2, 3, 1, 1, 2});
    EXPECT_EQ(rep.contents, 64u);
    EXPECT_GT(rep.runs, 0u);
    EXPECT_EQ(rep.violations, 0u);
    EXPECT_LE(rep.max_cost, 2);
}

TEST(Audit, ExhaustiveT3) {
    const auto rep = exhaustive_audit(CodeParams{2, 3, 1, 1, 3});
    EXPECT_EQ(rep.violations, 0u);
    EXPECT_LE(rep.max_cost, 3);
}

TEST(Audit, ExhaustiveSingleBlockT4) {
    const auto rep = exhaustive_audit(CodeParams{3, 1, 1, 1, 4});
    EXPECT_EQ(rep.violations, 0u);
    EXPECT_LE(rep.max_cost, 4);
}

TEST(Audit, RandomLargerCodes) {
    for (const CodeParams p : {CodeParams{3, 7, 2, 2, 5}, CodeParams{4, 10, 4, 4, 6}}) {
        ExperimentConfig cfg;
        cfg.params = p;
        cfg.trials = 3000;
        cfg.seed = 1234;
        cfg.threads = 1;
        const auto rep = run_experiment(cfg);
        EXPECT_EQ(rep.violation_trials, 0u);
        EXPECT_EQ(rep.decode_failures, 0u);
        EXPECT_LE(rep.max_cost, p.t);
    }
}
