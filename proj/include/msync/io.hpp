#pragma once

// JSON and plain-text formats for parameters, codes, error patterns,
// decode outcomes, decompositions and density-operator dumps.

#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "bits.hpp"
#include "channel.hpp"
#include "gf2e.hpp"
#include "hagiwara.hpp"
#include "perm_decomp.hpp"
#include "quantum_sim.hpp"
#include "rs_code.hpp"

namespace msync {

using nlohmann::json;

/// Raised for unreadable or malformed input files.
class IOError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void to_json(json& j, const CodeParams& p) {
    j = json{{"E", p.E}, {"N", p.N}, {"K1", p.K1}, {"K2", p.K2}, {"t", p.t}};
}

inline void from_json(const json& j, CodeParams& p) {
    p.E = j.at("E").get<int>();
    p.N = j.at("N").get<int>();
    p.K1 = j.at("K1").get<int>();
    p.K2 = j.value("K2", p.K1);
    p.t = j.at("t").get<int>();
}

inline json field_to_json(const FieldTable& f) { return json{{"E", f.degree()}, {"poly", f.poly()}}; }

inline FieldTable field_from_json(const json& j) {
    const int E = j.at("E").get<int>();
    return j.contains("poly") ? FieldTable(E, j.at("poly").get<std::uint32_t>()) : FieldTable(E);
}

inline json basis_to_json(const Basis& b) { return json(b.elements); }

inline Basis basis_from_json(const FieldTable& f, const json& j) {
    return make_basis(f, j.get<std::vector<Symbol>>());
}

inline json code_to_json(const RSCode& c) {
    json j{{"N", c.length()},
           {"K", c.dimension()},
           {"E", c.field().degree()},
           {"poly", c.field().poly()},
           {"eval_points", c.eval_points()}};
    if (!c.is_plain()) j["multipliers"] = c.multipliers();
    return j;
}

inline RSCode code_from_json(const json& j) {
    const auto f = field_from_json(j);
    const int K = j.at("K").get<int>();
    if (!j.contains("eval_points")) return RSCode::standard(f, j.at("N").get<int>(), K);
    auto pts = j.at("eval_points").get<SymbolWord>();
    auto mult = j.value("multipliers", SymbolWord{});
    if (j.contains("N") && j.at("N").get<int>() != static_cast<int>(pts.size()))
        throw std::invalid_argument("code_from_json: N disagrees with eval_points");
    return RSCode(f, K, std::move(pts), std::move(mult));
}

inline void to_json(json& j, const ErrorPattern& p) {
    std::vector<int> payload(p.payload.begin(), p.payload.end());
    j = json{{"J", p.deletions}, {"K", p.insertions}, {"payload", payload}};
}

inline void from_json(const json& j, ErrorPattern& p) {
    p.deletions = j.at("J").get<std::vector<int>>();
    p.insertions = j.at("K").get<std::vector<int>>();
    p.payload.clear();
    for (int b : j.at("payload").get<std::vector<int>>()) {
        if (b != 0 && b != 1) throw std::invalid_argument("ErrorPattern: payload entries must be 0 or 1");
        p.payload.push_back(static_cast<std::uint8_t>(b));
    }
    if (p.payload.size() != p.insertions.size()) throw std::invalid_argument("ErrorPattern: payload size != |K|");
}

inline json to_json(const BranchStep& s) {
    return json{{"block", s.block}, {"line", static_cast<int>(s.branch)}, {"w", s.w}, {"l", s.l},
                {"u", s.u},         {"v", s.v},                           {"window", to_string(s.window)}};
}

inline json trace_to_json(const std::vector<BranchStep>& trace) {
    json a = json::array();
    for (const auto& s : trace) a.push_back(to_json(s));
    return a;
}

inline json blocks_to_json(const std::vector<MaybeBlock>& z) {
    json a = json::array();
    for (const auto& b : z) a.push_back(b ? to_string(*b) : std::string("?"));
    return a;
}

inline json to_json(const DecodeOutcome& o) {
    json j{{"status", to_string(o.status)}, {"detail", o.detail}};
    j["z"] = blocks_to_json(o.scan.z);
    j["P"] = o.scan.erased;
    j["trace"] = trace_to_json(o.scan.trace);
    j["message"] = o.message ? json(*o.message) : json(nullptr);
    if (o.status != DecodeStatus::malformed_input) j["errors_corrected"] = o.rs.errors_corrected;
    return j;
}

inline json to_json(const SupportDecomposition& d) {
    json S = json::array();
    for (const auto& s : d.intervals) S.push_back({s.lo, s.hi});
    return json{{"k", d.k}, {"S", S}};
}

inline json to_json(const Permutation& p) { return json(p.image()); }

/// Either inline JSON text or a path to a JSON file.
inline json load_json_arg(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && arg[first] == '{') {
        try {
            return json::parse(arg);
        } catch (const json::parse_error& e) {
            throw IOError(std::string("invalid JSON: ") + e.what());
        }
    }
    std::ifstream in(arg);
    if (!in) throw IOError("cannot open " + arg);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IOError(arg + ": invalid JSON: " + e.what());
    }
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path);
    out << text;
    if (!out) throw IOError("write failed: " + path);
}

/// A bitstring file: '0'/'1' characters, surrounding whitespace ignored.
inline Bits read_bits_file(const std::string& path) {
    std::string s;
    for (char c : read_text(path))
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    try {
        return bits_from_string(s);
    } catch (const std::invalid_argument& e) {
        throw IOError(path + ": " + e.what());
    }
}

inline void write_bits_file(const std::string& path, std::span<const std::uint8_t> bits) {
    write_text(path, to_string(bits) + "\n");
}

/// Whitespace-separated decimal symbols.
inline SymbolWord read_symbols_file(const std::string& path) {
    std::istringstream in(read_text(path));
    SymbolWord out;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(tok, &used, 0);
            if (used != tok.size() || v > std::numeric_limits<Symbol>::max()) throw std::invalid_argument(tok);
            out.push_back(static_cast<Symbol>(v));
        } catch (const std::exception&) {
            throw IOError(path + ": not a field symbol: " + tok);
        }
    }
    return out;
}

/// One JSON object {"x", "y", "re", "im"} per line, sorted by (x, y).
inline void dump_state(std::ostream& out, const SparseDensityOperator& rho) {
    const int n = rho.num_qubits();
    for (const auto& [k, v] : rho.sorted_entries()) {
        json j{{"x", qbits::to_string(k.x, n)}, {"y", qbits::to_string(k.y, n)}, {"re", v.real()}, {"im", v.imag()}};
        out << j.dump() << '\n';
    }
}

inline SparseDensityOperator load_state(std::istream& in) {
    std::string line;
    int n = -1;
    std::vector<std::tuple<BasisString, BasisString, Complex>> rows;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw IOError(std::string("state dump: invalid JSON line: ") + e.what());
        }
        const auto xs = j.at("x").get<std::string>(), ys = j.at("y").get<std::string>();
        if (n < 0) n = static_cast<int>(xs.size());
        if (static_cast<int>(xs.size()) != n || static_cast<int>(ys.size()) != n)
            throw IOError("state dump: inconsistent qubit counts");
        rows.emplace_back(qbits::from_string(xs), qbits::from_string(ys),
                          Complex{j.at("re").get<double>(), j.value("im", 0.0)});
    }
    SparseDensityOperator rho(std::max(n, 0));
    for (const auto& [x, y, v] : rows) rho.add(x, y, v);
    return rho;
}

}  // namespace msync
