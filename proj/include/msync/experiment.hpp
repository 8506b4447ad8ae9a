#pragma once

// Seeded Monte-Carlo sweeps, exhaustive audits and the quantum demo behind
// the command-line tool.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "channel.hpp"
#include "diagnostics.hpp"
#include "hagiwara.hpp"
#include "io.hpp"
#include "qrs.hpp"
#include "rng.hpp"

namespace msync {

struct ExperimentConfig {
    CodeParams params;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    std::optional<int> td;  // fixed budget when both td and ti are set
    std::optional<int> ti;
    std::string out;
    unsigned threads = 0;   // 0: hardware concurrency

    bool fixed_budget() const noexcept { return td.has_value() && ti.has_value(); }

    void validate() const {
        params.validate_classical();
        if (td.has_value() != ti.has_value()) throw std::invalid_argument("ExperimentConfig: give both td and ti or neither");
        if (fixed_budget()) {
            if (*td < 0 || *ti < 0 || *td + *ti > params.t)
                throw std::invalid_argument("ExperimentConfig: need td, ti >= 0 and td + ti <= t");
        } else if (params.t < 2) {
            throw std::invalid_argument("ExperimentConfig: the uniform budget needs t >= 2");
        }
    }
};

/// All (t_d, t_i) with t_d, t_i >= 1 and t_d + t_i <= t.
inline std::vector<std::pair<int, int>> budget_pairs(int t) {
    std::vector<std::pair<int, int>> out;
    for (int d = 1; d < t; ++d)
        for (int i = 1; d + i <= t; ++i) out.emplace_back(d, i);
    return out;
}

struct TrialRecord {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    int td = 0, ti = 0;
    ErrorPattern pattern;
    std::vector<BranchStep> trace;
    std::vector<int> P;
    int P_e = 0, P_s = 0;
    bool audited = false;
    std::vector<std::string> violations;
    DecodeStatus status = DecodeStatus::ok;
    bool message_ok = false;

    int cost() const noexcept { return P_e + 2 * P_s; }
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<TrialRecord> records;
    std::uint64_t successes = 0;
    std::uint64_t decode_failures = 0;
    std::uint64_t violation_trials = 0;
    int max_cost = 0;
    double runtime_seconds = 0.0;
    std::string timestamp;

    double success_rate() const noexcept {
        return records.empty() ? 1.0 : static_cast<double>(successes) / static_cast<double>(records.size());
    }
};

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Runs fn(i) for i in [0, count) on a small thread pool.
template <typename Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i; (i = next.fetch_add(1)) < count;) fn(i);
    };
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

/// One trial: random message, sampled pattern, transmit, audit, decode.
inline TrialRecord run_trial(const ExperimentConfig& cfg, const RSCode& outer, const BasisExpansion& ex,
                             std::uint64_t index) {
    const auto& p = cfg.params;
    TrialRecord rec;
    rec.index = index;
    rec.seed = derive_seed(cfg.seed, index);
    Rng rng(rec.seed);

    SymbolWord msg(static_cast<std::size_t>(p.K1));
    for (auto& m : msg) m = static_cast<Symbol>(uniform_below(rng, outer.field().size()));
    if (cfg.fixed_budget()) {
        rec.td = *cfg.td;
        rec.ti = *cfg.ti;
    } else {
        const auto pairs = budget_pairs(p.t);
        std::tie(rec.td, rec.ti) = pairs[uniform_below(rng, pairs.size())];
    }

    const Bits c = encode_message(msg, outer, ex, p);
    rec.pattern = sample_composite(rng(), static_cast<int>(c.size()), rec.td, rec.ti);
    const Bits y = transmit(c, rec.pattern);

    const auto out = decode(y, p, outer, ex);
    rec.trace = out.scan.trace;
    rec.P = out.scan.erased;
    rec.P_e = static_cast<int>(out.scan.erased.size());
    rec.status = out.status;
    rec.message_ok = out.ok() && *out.message == msg;

    if (rec.td >= 1 && rec.ti >= 1) {
        const auto d = classify_blocks(c, y, rec.pattern, p);
        rec.audited = true;
        rec.P_s = static_cast<int>(d.P_s.size());
        rec.violations = audit(d, c, y);
    } else {
        for (const auto& s : out.scan.trace)
            if (s.branch == Branch::copy) {
                const int b = s.block;
                const Bits got = *out.scan.z[static_cast<std::size_t>(b - 1)];
                if (got != slice(c, p.block_start(b) + 1, p.block_start(b) + p.E)) ++rec.P_s;
            }
        if (rec.cost() > p.t) rec.violations.push_back("|P_e| + 2|P_s| exceeds t");
    }
    return rec;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const FieldTable f(cfg.params.E);
    const BasisExpansion ex(f, find_self_dual_basis(f));
    const auto outer = RSCode::standard(f, cfg.params.N, cfg.params.K1);

    ExperimentReport rep;
    rep.config = cfg;
    rep.records.resize(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, cfg.threads,
                 [&](std::uint64_t i) { rep.records[static_cast<std::size_t>(i)] = run_trial(cfg, outer, ex, i); });
    for (const auto& r : rep.records) {
        rep.successes += r.message_ok;
        rep.decode_failures += !r.message_ok;
        rep.violation_trials += !r.violations.empty();
        rep.max_cost = std::max(rep.max_cost, r.cost());
    }
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.timestamp = utc_timestamp();
    return rep;
}

inline json to_json(const TrialRecord& r) {
    json j{{"index", r.index},   {"seed", r.seed},           {"td", r.td},   {"ti", r.ti},
           {"pattern", r.pattern}, {"trace", trace_to_json(r.trace)}, {"P", r.P}, {"P_e", r.P_e},
           {"P_s", r.P_s},       {"audited", r.audited},     {"status", to_string(r.status)},
           {"message_ok", r.message_ok}};
    if (!r.violations.empty()) j["violations"] = r.violations;
    return j;
}

inline json to_json(const ExperimentReport& rep) {
    json cfg{{"params", rep.config.params}, {"trials", rep.config.trials}, {"seed", rep.config.seed}};
    cfg["budget"] = rep.config.fixed_budget() ? json{{"td", *rep.config.td}, {"ti", *rep.config.ti}} : json("uniform");
    json recs = json::array();
    for (const auto& r : rep.records) recs.push_back(to_json(r));
    return json{{"config", cfg},
                {"aggregates",
                 {{"trials", rep.records.size()},
                  {"successes", rep.successes},
                  {"decode_failures", rep.decode_failures},
                  {"violation_trials", rep.violation_trials},
                  {"success_rate", rep.success_rate()},
                  {"max_cost", rep.max_cost}}},
                {"records", recs},
                {"runtime_seconds", rep.runtime_seconds},
                {"timestamp", rep.timestamp}};
}

struct AuditReport {
    CodeParams params;
    std::uint64_t contents = 0;  // distinct block contents tried
    std::uint64_t runs = 0;
    std::uint64_t violations = 0;
    int max_cost = 0;
    std::vector<json> forensics;  // first few offending runs
};

/// Every pattern with t_d, t_i >= 1 and t_d + t_i <= t, applied to every
/// binary block content (all 2^{NE} of them), checked by `audit`.
inline AuditReport exhaustive_audit(const CodeParams& p, std::size_t max_forensics = 10) {
    p.validate_layout();
    if (p.logical_qubits() > 16) throw std::invalid_argument("exhaustive_audit: N*E must be at most 16");
    AuditReport rep;
    rep.params = p;
    rep.contents = std::uint64_t{1} << p.logical_qubits();
    for (std::uint64_t content = 0; content < rep.contents; ++content) {
        std::vector<Bits> blocks(static_cast<std::size_t>(p.N), Bits(static_cast<std::size_t>(p.E)));
        for (int b = 0; b < p.N; ++b)
            for (int k = 0; k < p.E; ++k)
                blocks[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] = (content >> (b * p.E + k)) & 1u;
        const Bits c = encode_classical(blocks, p);
        for (const auto& [td, ti] : budget_pairs(p.t))
            for_each_pattern(static_cast<int>(c.size()), td, ti, [&](const ErrorPattern& pat) {
                const Bits y = transmit(c, pat);
                const auto d = classify_blocks(c, y, pat, p);
                const auto bad = audit(d, c, y);
                ++rep.runs;
                rep.max_cost = std::max(rep.max_cost, static_cast<int>(d.P_e.size() + 2 * d.P_s.size()));
                if (bad.empty()) return;
                ++rep.violations;
                if (rep.forensics.size() < max_forensics)
                    rep.forensics.push_back(
                        {{"c", to_string(c)}, {"y", to_string(y)}, {"pattern", pat}, {"violations", bad}});
            });
    }
    return rep;
}

inline json to_json(const AuditReport& r) {
    return json{{"params", r.params},         {"contents", r.contents}, {"runs", r.runs},
                {"violations", r.violations}, {"max_cost", r.max_cost}, {"forensics", r.forensics}};
}

struct QuantumDemoConfig {
    CodeParams params;
    std::uint64_t seed = 0;
    int td = 1, ti = 1;
    int max_qubits = 24;
};

struct QuantumDemoReport {
    CodeParams params;
    std::uint64_t seed = 0;
    ErrorPattern pattern;  // payload unused; see inserted
    std::vector<std::string> inserted;
    std::vector<std::string> warnings;
    QuantumScanResult scan;
    RecoveryResult recovery;
    double fidelity = 0.0;
};

/// The single-qubit states the demo inserts.
inline std::pair<std::string, QubitState> demo_insert_state(std::uint64_t k) {
    switch (k % 4) {
        case 0: return {"|0>", QubitState::zero()};
        case 1: return {"|1>", QubitState::one()};
        case 2: return {"|+>", QubitState::plus()};
        default: return {"I/2", QubitState::maximally_mixed()};
    }
}

/// Structural checks for the demo; the erasure-capacity conditions only warn.
inline std::vector<std::string> check_quantum_demo(const QuantumDemoConfig& cfg) {
    const auto& p = cfg.params;
    p.validate_layout();
    if (p.N > static_cast<int>((1u << p.E) - 1)) throw std::invalid_argument("quantum-demo: need N <= 2^E - 1");
    if (!(1 <= p.K2 && p.K2 <= p.K1 && p.K1 <= p.N)) throw std::invalid_argument("quantum-demo: need 1 <= K2 <= K1 <= N");
    if (p.K2 == p.N) throw std::invalid_argument("quantum-demo: need K2 < N");
    if (p.codeword_length() > cfg.max_qubits)
        throw std::invalid_argument("quantum-demo: " + std::to_string(p.codeword_length()) + " physical qubits exceeds the limit of " +
                                    std::to_string(cfg.max_qubits));
    if (cfg.td < 0 || cfg.ti < 0 || cfg.td + cfg.ti > p.t) throw std::invalid_argument("quantum-demo: need td + ti <= t");
    std::vector<std::string> warn;
    if (p.N - p.K1 < p.t) warn.push_back("N - K1 < t: C1 cannot absorb every pattern the scan may produce");
    if (p.K2 < p.t) warn.push_back("K2 < t: the dual of C2 cannot absorb every pattern the scan may produce");
    return warn;
}

/// Random logical state, encode, sampled deletions and insertions of the
/// four demo states, quantum scan, CSS recovery, fidelity. When `channel_out`
/// is given it replaces the sampled error.
inline QuantumDemoReport run_quantum_demo(const QuantumDemoConfig& cfg,
                                          const std::optional<SparseDensityOperator>& channel_out = std::nullopt) {
    QuantumDemoReport rep;
    rep.warnings = check_quantum_demo(cfg);
    rep.params = cfg.params;
    rep.seed = cfg.seed;
    const auto& p = cfg.params;
    const FieldTable f(p.E);
    const BasisExpansion ex(f, find_self_dual_basis(f));
    const auto [C1, C2] = nested_pair(f, p.N, p.K1, p.K2);

    Rng rng(cfg.seed);
    std::vector<Complex> alphas(logical_dimension(C1, C2));
    for (auto& a : alphas) a = Complex(uniform_unit(rng) - 0.5, uniform_unit(rng) - 0.5);
    const auto cw = build_qrs(p, C1, C2, ex, alphas);

    SparseDensityOperator sigma;
    if (channel_out) {
        sigma = *channel_out;
    } else {
        const auto n = p.codeword_length();
        rep.pattern.deletions = sample_subset(rng, n, cfg.td);
        rep.pattern.insertions = sample_subset(rng, n - cfg.td + cfg.ti, cfg.ti);
        std::vector<QubitState> states;
        for (int i = 0; i < cfg.ti; ++i) {
            auto [name, st] = demo_insert_state(uniform_below(rng, 4));
            rep.inserted.push_back(name);
            states.push_back(st);
        }
        sigma = quantum_insert(quantum_delete(encode_hagiwara_quantum(cw, p.t), rep.pattern.deletions),
                               rep.pattern.insertions, states);
    }
    rep.scan = quantum_algorithm1(sigma, p, rng);
    rep.recovery = css_recover(rep.scan.state, rep.scan.erased, C1, C2, ex);
    rep.fidelity = fidelity(rep.recovery.state, cw.state);
    return rep;
}

inline json to_json(const QuantumDemoReport& r) {
    json outcomes = json::array();
    for (const auto& o : r.scan.record.outcomes) outcomes.push_back(to_string(o));
    return json{{"params", r.params},
                {"seed", r.seed},
                {"deletions", r.pattern.deletions},
                {"insertions", r.pattern.insertions},
                {"inserted_states", r.inserted},
                {"warnings", r.warnings},
                {"P", r.scan.erased},
                {"trace", trace_to_json(r.scan.trace)},
                {"marker_outcomes", outcomes},
                {"recovery_ok", r.recovery.ok},
                {"recovery_detail", r.recovery.detail},
                {"fidelity", r.fidelity}};
}

}  // namespace msync
