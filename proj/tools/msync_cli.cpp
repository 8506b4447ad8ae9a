// msync: encode, corrupt, decode, sweep and audit marker-synchronized RS
// codes, and run the quantum demo.
//
// Exit codes: 0 success, 1 decode or recovery failure, 2 invariant
// violation, 3 usage or I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "msync/experiment.hpp"

namespace {

using namespace msync;

constexpr int kExitOk = 0;
constexpr int kExitDecodeFailure = 1;
constexpr int kExitViolation = 2;
constexpr int kExitUsage = 3;

struct Options {
    std::string params;
    std::uint64_t seed = 0;
    std::uint64_t trials = 1;
    std::optional<int> td, ti;
    bool exhaustive = false;
    std::string in, out, pattern_out, state_out;
    unsigned threads = 0;
};

CodeParams load_params(const Options& o) {
    if (o.params.empty()) throw std::invalid_argument("--params is required");
    return load_json_arg(o.params).get<CodeParams>();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_text(path, text);
}

struct Codec {
    CodeParams params;
    FieldTable field;
    BasisExpansion ex;
    RSCode outer;

    explicit Codec(const CodeParams& p)
        : params(p), field(p.E), ex(field, find_self_dual_basis(field)), outer(RSCode::standard(field, p.N, p.K1)) {}
};

int cmd_encode(const Options& o) {
    const auto p = load_params(o);
    p.validate_classical();
    if (o.in.empty()) throw std::invalid_argument("encode: --in <message file> is required");
    const Codec codec(p);
    const auto msg = read_symbols_file(o.in);
    if (static_cast<int>(msg.size()) != p.K1)
        throw std::invalid_argument("encode: message must hold K1 = " + std::to_string(p.K1) + " symbols");
    for (auto s : msg)
        if (!codec.field.contains(s)) throw std::invalid_argument("encode: symbol outside GF(2^E)");
    emit(o.out, to_string(encode_message(msg, codec.outer, codec.ex, p)) + "\n");
    return kExitOk;
}

int cmd_corrupt(const Options& o) {
    if (o.in.empty()) throw std::invalid_argument("corrupt: --in <codeword file> is required");
    const Bits c = read_bits_file(o.in);
    const int td = o.td.value_or(0), ti = o.ti.value_or(0);
    const auto pattern = sample_composite(o.seed, static_cast<int>(c.size()), td, ti);
    emit(o.out, to_string(transmit(c, pattern)) + "\n");
    const std::string pat = json(pattern).dump() + "\n";
    if (!o.pattern_out.empty()) write_text(o.pattern_out, pat);
    else if (!o.out.empty() && o.out != "-") std::cout << pat;
    return kExitOk;
}

int cmd_decode(const Options& o) {
    const auto p = load_params(o);
    p.validate_classical();
    if (o.in.empty()) throw std::invalid_argument("decode: --in <received file> is required");
    const Codec codec(p);
    const auto outcome = decode(read_bits_file(o.in), p, codec.outer, codec.ex);
    emit(o.out, to_json(outcome).dump(2) + "\n");
    return outcome.ok() ? kExitOk : kExitDecodeFailure;
}

int report_audit(const AuditReport& a, const std::string& out) {
    emit(out, to_json(a).dump(2) + "\n");
    if (a.violations) {
        std::cerr << "audit: " << a.violations << " runs violate the block-error bounds\n";
        return kExitViolation;
    }
    return kExitOk;
}

int cmd_experiment(const Options& o) {
    ExperimentConfig cfg;
    cfg.params = load_params(o);
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.td = o.td;
    cfg.ti = o.ti;
    cfg.out = o.out;
    cfg.threads = o.threads;
    if (o.exhaustive) return report_audit(exhaustive_audit(cfg.params), o.out);

    const auto rep = run_experiment(cfg);
    emit(o.out, to_json(rep).dump(2) + "\n");
    if (rep.violation_trials) {
        for (const auto& r : rep.records)
            if (!r.violations.empty()) {
                std::cerr << "experiment: invariant violation in trial " << r.index << "\n"
                          << to_json(r).dump(2) << "\n";
                break;
            }
        return kExitViolation;
    }
    return rep.decode_failures ? kExitDecodeFailure : kExitOk;
}

int cmd_audit(const Options& o) {
    const auto p = load_params(o);
    if (o.exhaustive) return report_audit(exhaustive_audit(p), o.out);
    ExperimentConfig cfg;
    cfg.params = p;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    const auto rep = run_experiment(cfg);
    json j{{"params", p}, {"trials", rep.records.size()}, {"violation_trials", rep.violation_trials},
           {"max_cost", rep.max_cost}};
    json bad = json::array();
    for (const auto& r : rep.records)
        if (!r.violations.empty() && bad.size() < 10) bad.push_back(to_json(r));
    j["forensics"] = bad;
    emit(o.out, j.dump(2) + "\n");
    return rep.violation_trials ? kExitViolation : kExitOk;
}

int cmd_quantum_demo(const Options& o) {
    QuantumDemoConfig cfg;
    cfg.params = load_params(o);
    cfg.seed = o.seed;
    cfg.td = o.td.value_or(1);
    cfg.ti = o.ti.value_or(1);
    std::optional<SparseDensityOperator> channel_out;
    if (!o.in.empty()) {
        std::ifstream in(o.in);
        if (!in) throw IOError("cannot open " + o.in);
        channel_out = load_state(in);
    }
    const auto rep = run_quantum_demo(cfg, channel_out);
    for (const auto& w : rep.warnings) std::cerr << "quantum-demo: warning: " << w << "\n";
    emit(o.out, to_json(rep).dump(2) + "\n");
    if (!o.state_out.empty()) {
        std::ofstream s(o.state_out);
        if (!s) throw IOError("cannot write " + o.state_out);
        dump_state(s, rep.recovery.state);
    }
    return rep.recovery.ok && rep.fidelity >= 1.0 - 1e-9 ? kExitOk : kExitDecodeFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Marker-synchronized Reed-Solomon codes for deletions and insertions"};
    app.require_subcommand(1);
    Options o;

    auto add_params = [&](CLI::App* sc) {
        sc->add_option("--params", o.params, "Code parameters {E,N,K1,K2,t}: inline JSON or a file path");
    };
    auto add_budget = [&](CLI::App* sc) {
        sc->add_option("--td", o.td, "Number of deletions");
        sc->add_option("--ti", o.ti, "Number of insertions");
    };

    auto* enc = app.add_subcommand("encode", "Encode K1 field symbols into a bitstring codeword");
    add_params(enc);
    enc->add_option("--in", o.in, "Message file: whitespace-separated symbols");
    enc->add_option("--out", o.out, "Codeword file (default stdout)");

    auto* cor = app.add_subcommand("corrupt", "Apply a seeded deletion/insertion pattern");
    add_params(cor);
    cor->add_option("--in", o.in, "Codeword file");
    cor->add_option("--out", o.out, "Received-word file (default stdout)");
    cor->add_option("--pattern-out", o.pattern_out, "Where to write the pattern JSON");
    cor->add_option("--seed", o.seed, "Pattern seed");
    add_budget(cor);

    auto* dec = app.add_subcommand("decode", "Decode a received word; prints outcome JSON");
    add_params(dec);
    dec->add_option("--in", o.in, "Received-word file");
    dec->add_option("--out", o.out, "Outcome JSON (default stdout)");

    auto* exp = app.add_subcommand("experiment", "Seeded Monte-Carlo roundtrip sweep");
    add_params(exp);
    exp->add_option("--trials", o.trials, "Number of trials");
    exp->add_option("--seed", o.seed, "Master seed");
    add_budget(exp);
    exp->add_flag("--exhaustive", o.exhaustive, "Enumerate every pattern instead of sampling");
    exp->add_option("--threads", o.threads, "Worker threads (default: all cores)");
    exp->add_option("--out", o.out, "Report JSON (default stdout)");

    auto* aud = app.add_subcommand("audit", "Check the block-error bounds on sampled or all patterns");
    add_params(aud);
    aud->add_flag("--exhaustive", o.exhaustive, "Enumerate every pattern and block content");
    aud->add_option("--trials", o.trials, "Number of sampled trials");
    aud->add_option("--seed", o.seed, "Master seed");
    aud->add_option("--threads", o.threads, "Worker threads (default: all cores)");
    aud->add_option("--out", o.out, "Report JSON (default stdout)");

    auto* qd = app.add_subcommand("quantum-demo", "Quantum codeword, composite error, scan and recovery");
    add_params(qd);
    qd->add_option("--seed", o.seed, "Seed for the logical state, the error and the measurements");
    add_budget(qd);
    qd->add_option("--in", o.in, "Channel output as a JSON-lines state dump (replaces the sampled error)");
    qd->add_option("--out", o.out, "Report JSON (default stdout)");
    qd->add_option("--state-out", o.state_out, "Where to dump the recovered state as JSON lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*enc) return cmd_encode(o);
        if (*cor) return cmd_corrupt(o);
        if (*dec) return cmd_decode(o);
        if (*exp) return cmd_experiment(o);
        if (*aud) return cmd_audit(o);
        if (*qd) return cmd_quantum_demo(o);
    } catch (const IOError& e) {
        std::cerr << "msync: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "msync: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "msync: bad parameters: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "msync: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "msync: internal inconsistency: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitUsage;
}
