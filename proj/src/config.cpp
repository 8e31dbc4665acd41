#include "eqasm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eqasm/isa.hpp"

namespace eqasm {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view strip_comment(std::string_view line) {
    const auto pos = line.find('#');
    return pos == std::string_view::npos ? line : line.substr(0, pos);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Plain decimal, 0x hex or 0b binary (the three assembly literal forms).
std::optional<std::uint64_t> parse_unsigned(std::string_view text) {
    text = trim(text);
    if (text.empty())
        return std::nullopt;
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        base = 16;
        text.remove_prefix(2);
    } else if (text.size() > 2 && text[0] == '0' &&
               (text[1] == 'b' || text[1] == 'B')) {
        base = 2;
        text.remove_prefix(2);
    }
    std::uint64_t value = 0;
    for (char c : text) {
        int digit;
        if (c >= '0' && c <= '9')
            digit = c - '0';
        else if (c >= 'a' && c <= 'f')
            digit = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            digit = c - 'A' + 10;
        else
            return std::nullopt;
        if (digit >= base)
            return std::nullopt;
        if (value > (~0ull - static_cast<std::uint64_t>(digit)) / base)
            return std::nullopt; // overflow
        value = value * static_cast<std::uint64_t>(base) +
                static_cast<std::uint64_t>(digit);
    }
    return value;
}

// Splits on whitespace, keeping parenthesized groups attached to their
// word (for unitary=matrix(...) values).
std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    int depth = 0;
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c)) && depth == 0) {
            if (!cur.empty()) {
                fields.push_back(cur);
                cur.clear();
            }
        } else {
            if (c == '(')
                ++depth;
            else if (c == ')')
                --depth;
            cur += c;
        }
    }
    if (!cur.empty())
        fields.push_back(cur);
    return fields;
}

} // namespace

std::string_view op_kind_name(OpKind k) {
    switch (k) {
    case OpKind::None: return "none";
    case OpKind::Single: return "single";
    case OpKind::Two: return "two";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// OpcodeMap

void OpcodeMap::add(const std::string &name, OpKind kind, std::uint32_t opcode,
                    const SourceLoc &loc) {
    const std::string key = to_lower(name);
    if (key.empty())
        throw ConfigError(loc, "empty operation name");
    if (opcode > kMaxQuantumOpcode)
        throw ConfigError(loc, "opcode " + std::to_string(opcode) +
                                   " exceeds the 9-bit limit of 511");
    if (key == "qnop" && (opcode != 0 || kind != OpKind::None))
        throw ConfigError(loc, "qnop must be kind none with opcode 0");
    if (entries_.count(key))
        throw ConfigError(loc, "duplicate operation name '" + name + "'");
    if (auto it = by_opcode_.find(opcode); it != by_opcode_.end())
        throw ConfigError(loc, "opcode " + std::to_string(opcode) +
                                   " already assigned to '" + it->second + "'");
    entries_[key] = Entry{kind, opcode};
    by_opcode_[opcode] = key;
}

OpcodeMap OpcodeMap::parse_qmap(std::string_view text,
                                const std::string &filename,
                                std::vector<Diagnostic> *warnings) {
    OpcodeMap map;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        SourceLoc loc{filename, lineno, 0};
        std::string_view line = trim(strip_comment(raw));
        if (line.empty())
            continue;

        // def_q_arg_none["name"] = N   (st / tt likewise; ' or " quotes)
        static constexpr std::string_view prefix = "def_q_arg_";
        if (line.substr(0, prefix.size()) != prefix)
            throw ConfigError(loc, "expected a def_q_arg_* entry");
        line.remove_prefix(prefix.size());

        OpKind kind;
        if (line.substr(0, 4) == "none") {
            kind = OpKind::None;
            line.remove_prefix(4);
        } else if (line.substr(0, 2) == "st") {
            kind = OpKind::Single;
            line.remove_prefix(2);
        } else if (line.substr(0, 2) == "tt") {
            kind = OpKind::Two;
            line.remove_prefix(2);
        } else {
            throw ConfigError(loc, "unknown def_q_arg_* suffix");
        }

        line = trim(line);
        if (line.empty() || line.front() != '[')
            throw ConfigError(loc, "expected '[' after def_q_arg_*");
        line.remove_prefix(1);
        line = trim(line);
        if (line.empty() || (line.front() != '"' && line.front() != '\''))
            throw ConfigError(loc, "expected a quoted operation name");
        const char quote = line.front();
        line.remove_prefix(1);
        const auto endq = line.find(quote);
        if (endq == std::string_view::npos)
            throw ConfigError(loc, "unterminated operation name");
        const std::string name{line.substr(0, endq)};
        line = trim(line.substr(endq + 1));
        if (line.empty() || line.front() != ']')
            throw ConfigError(loc, "expected ']' after operation name");
        line = trim(line.substr(1));
        if (line.empty() || line.front() != '=')
            throw ConfigError(loc, "expected '=' in qmap entry");
        const auto value = parse_unsigned(line.substr(1));
        if (!value)
            throw ConfigError(loc, "bad opcode value");
        if (*value > kMaxQuantumOpcode)
            throw ConfigError(loc, "opcode " + std::to_string(*value) +
                                       " exceeds the 9-bit limit of 511");

        map.add(name, kind, static_cast<std::uint32_t>(*value), loc);

        if (warnings) {
            // The reference configuration keeps microwave codewords in
            // 1..127 and flux codewords in 128..255; stray values are
            // legal but suspicious.
            if (kind == OpKind::Single && (*value < 1 || *value > 127))
                warnings->push_back(
                    {Severity::Warning, loc,
                     "single-qubit opcode " + std::to_string(*value) +
                         " is outside the conventional range 1..127"});
            if (kind == OpKind::Two && (*value < 128 || *value > 255))
                warnings->push_back(
                    {Severity::Warning, loc,
                     "two-qubit opcode " + std::to_string(*value) +
                         " is outside the conventional range 128..255"});
        }
    }
    return map;
}

std::optional<OpcodeMap::Entry> OpcodeMap::lookup(std::string_view name) const {
    const auto it = entries_.find(to_lower(name));
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::string> OpcodeMap::name_of(std::uint32_t opcode) const {
    const auto it = by_opcode_.find(opcode);
    if (it == by_opcode_.end())
        return std::nullopt;
    return it->second;
}

std::string OpcodeMap::to_qmap_text() const {
    std::ostringstream os;
    for (const auto &[name, e] : entries_) {
        const char *suffix = e.kind == OpKind::None     ? "none"
                             : e.kind == OpKind::Single ? "st"
                                                        : "tt";
        os << "def_q_arg_" << suffix << "[\"" << name << "\"] = 0x" << std::hex
           << e.opcode << std::dec << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Topology

Topology Topology::default_topology() {
    static constexpr std::array<QubitPair, 8> edges = {
        QubitPair{0, 2}, {0, 3}, {1, 3}, {1, 4},
        {2, 5},          {3, 5}, {3, 6}, {4, 6},
    };
    Topology t;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [a, b] = edges[e];
        t.pairs_[2 * e] = {a, b};
        t.pairs_[2 * e + 1] = {b, a};
        t.index_[{a, b}] = static_cast<int>(2 * e);
        t.index_[{b, a}] = static_cast<int>(2 * e + 1);
    }
    return t;
}

Topology Topology::parse(std::string_view text, const std::string &filename) {
    Topology t;
    std::array<bool, 16> seen{};
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        SourceLoc loc{filename, lineno, 0};
        const std::string_view line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        std::istringstream fields{std::string(line)};
        std::string keyword;
        long idx, src, tgt;
        if (!(fields >> keyword >> idx >> src >> tgt) ||
            to_lower(keyword) != "pair")
            throw ConfigError(loc, "expected 'pair <index> <source> <target>'");
        std::string rest;
        if (fields >> rest)
            throw ConfigError(loc, "trailing text after pair entry");
        if (idx < 0 || idx >= 16)
            throw ConfigError(loc, "pair index must be 0..15");
        if (src < 0 || src >= kNumQubits || tgt < 0 || tgt >= kNumQubits)
            throw ConfigError(loc, "qubit address must be 0..6");
        if (src == tgt)
            throw ConfigError(loc, "pair source and target must differ");
        if (seen[static_cast<std::size_t>(idx)])
            throw ConfigError(loc, "duplicate pair index " + std::to_string(idx));
        const QubitPair p{static_cast<int>(src), static_cast<int>(tgt)};
        if (t.index_.count(p))
            throw ConfigError(loc, "duplicate qubit pair");
        seen[static_cast<std::size_t>(idx)] = true;
        t.pairs_[static_cast<std::size_t>(idx)] = p;
        t.index_[p] = static_cast<int>(idx);
    }
    for (int i = 0; i < 16; ++i)
        if (!seen[static_cast<std::size_t>(i)])
            throw ConfigError({filename, 0, 0},
                              "pair index " + std::to_string(i) + " missing");
    return t;
}

std::optional<int> Topology::pair_index(int source, int target) const {
    const auto it = index_.find({source, target});
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::string Topology::to_text() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < pairs_.size(); ++i)
        os << "pair " << i << ' ' << pairs_[i].first << ' ' << pairs_[i].second
           << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Builtin unitaries

namespace {

using namespace std::complex_literals;

constexpr double kInvSqrt2 = 0.7071067811865475244;

Mat4 diagonal4(std::complex<double> a, std::complex<double> b,
               std::complex<double> c, std::complex<double> d) {
    Mat4 m{};
    m[0] = a;
    m[5] = b;
    m[10] = c;
    m[15] = d;
    return m;
}

} // namespace

std::optional<Mat2> builtin_unitary2(std::string_view name) {
    const std::string n = to_lower(name);
    if (n == "i")
        return Mat2{1, 0, 0, 1};
    if (n == "x")
        return Mat2{0, 1, 1, 0};
    if (n == "y")
        return Mat2{0, -1i, 1i, 0};
    if (n == "z")
        return Mat2{1, 0, 0, -1};
    if (n == "h")
        return Mat2{kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
    if (n == "x90")
        return Mat2{kInvSqrt2, -1i * kInvSqrt2, -1i * kInvSqrt2, kInvSqrt2};
    if (n == "y90")
        return Mat2{kInvSqrt2, -kInvSqrt2, kInvSqrt2, kInvSqrt2};
    if (n == "mx90")
        return Mat2{kInvSqrt2, 1i * kInvSqrt2, 1i * kInvSqrt2, kInvSqrt2};
    if (n == "my90")
        return Mat2{kInvSqrt2, kInvSqrt2, -kInvSqrt2, kInvSqrt2};
    if (n == "t")
        return Mat2{1, 0, 0, std::polar(1.0, std::numbers::pi / 4)};
    if (n == "s")
        return Mat2{1, 0, 0, 1i};
    return std::nullopt;
}

std::optional<Mat4> builtin_unitary4(std::string_view name) {
    const std::string n = to_lower(name);
    if (n == "cz")
        return diagonal4(1, 1, 1, -1);
    if (n == "cnot") {
        Mat4 m{};
        m[0] = 1;
        m[5] = 1;
        m[11] = 1;
        m[14] = 1;
        return m;
    }
    if (n == "swap") {
        Mat4 m{};
        m[0] = 1;
        m[6] = 1;
        m[9] = 1;
        m[15] = 1;
        return m;
    }
    if (n == "cu00")
        return diagonal4(-1, 1, 1, 1);
    if (n == "cu01")
        return diagonal4(1, -1, 1, 1);
    if (n == "cu10")
        return diagonal4(1, 1, -1, 1);
    if (n == "cu11")
        return diagonal4(1, 1, 1, -1);
    return std::nullopt;
}

namespace {

template <std::size_t N>
bool is_unitary_impl(const std::array<std::complex<double>, N * N> &m,
                     double tol) {
    // U * U^dagger == I
    for (std::size_t r = 0; r < N; ++r) {
        for (std::size_t c = 0; c < N; ++c) {
            std::complex<double> dot = 0;
            for (std::size_t k = 0; k < N; ++k)
                dot += m[r * N + k] * std::conj(m[c * N + k]);
            const std::complex<double> expect = (r == c) ? 1.0 : 0.0;
            if (std::abs(dot - expect) > tol)
                return false;
        }
    }
    return true;
}

} // namespace

bool is_unitary(const Mat2 &m, double tol) {
    return is_unitary_impl<2>(m, tol);
}

bool is_unitary(const Mat4 &m, double tol) {
    return is_unitary_impl<4>(m, tol);
}

// ---------------------------------------------------------------------------
// GateSemantics

namespace {

// matrix((re,im),(re,im),...) with 4 or 16 row-major elements; a bare
// number is taken as a real element.
std::vector<std::complex<double>> parse_matrix(std::string_view text,
                                               const SourceLoc &loc) {
    text = trim(text);
    const std::string low = to_lower(std::string(text.substr(0, 7)));
    if (low.rfind("matrix(", 0) != 0 || text.back() != ')')
        throw ConfigError(loc, "expected matrix(...)");
    text = text.substr(7, text.size() - 8);

    std::vector<std::complex<double>> out;
    std::size_t i = 0;
    const auto skip_ws = [&] {
        while (i < text.size() &&
               std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    while (true) {
        skip_ws();
        if (i >= text.size())
            break;
        if (text[i] == ',') {
            ++i;
            continue;
        }
        if (text[i] == '(') {
            const auto close = text.find(')', i);
            if (close == std::string_view::npos)
                throw ConfigError(loc, "unterminated complex element");
            const std::string_view inner = text.substr(i + 1, close - i - 1);
            const auto comma = inner.find(',');
            if (comma == std::string_view::npos)
                throw ConfigError(loc, "complex element needs (re,im)");
            try {
                const double re = std::stod(std::string(trim(inner.substr(0, comma))));
                const double im = std::stod(std::string(trim(inner.substr(comma + 1))));
                out.emplace_back(re, im);
            } catch (const std::exception &) {
                throw ConfigError(loc, "bad complex element");
            }
            i = close + 1;
        } else {
            std::size_t end = i;
            while (end < text.size() && text[end] != ',' && text[end] != '(')
                ++end;
            try {
                out.emplace_back(std::stod(std::string(trim(text.substr(i, end - i)))),
                                 0.0);
            } catch (const std::exception &) {
                throw ConfigError(loc, "bad matrix element");
            }
            i = end;
        }
    }
    if (out.size() != 4 && out.size() != 16)
        throw ConfigError(loc, "matrix must have 4 or 16 elements, got " +
                                   std::to_string(out.size()));
    return out;
}

} // namespace

GateSemantics GateSemantics::parse(std::string_view text, const OpcodeMap &ops,
                                   const std::string &filename) {
    GateSemantics g;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        SourceLoc loc{filename, lineno, 0};
        const std::string_view line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        const auto fields = split_fields(line);
        const std::string keyword = to_lower(fields[0]);

        if (fields.size() < 2)
            throw ConfigError(loc, "missing operation name");
        const std::string name = to_lower(fields[1]);
        const auto mapped = ops.lookup(name);
        if (!mapped)
            throw ConfigError(loc, "operation '" + fields[1] +
                                       "' is not in the opcode map");
        if (g.by_opcode_.count(mapped->opcode))
            throw ConfigError(loc, "duplicate semantics for '" + fields[1] + "'");

        Entry e{};
        std::optional<int> duration;
        std::optional<std::string> unitary;
        std::optional<std::string> kind;
        for (std::size_t i = 2; i < fields.size(); ++i) {
            const auto eq = fields[i].find('=');
            if (eq == std::string::npos)
                throw ConfigError(loc, "expected key=value, got '" + fields[i] +
                                           "'");
            const std::string key = to_lower(fields[i].substr(0, eq));
            const std::string value = fields[i].substr(eq + 1);
            if (key == "duration") {
                const auto v = parse_unsigned(value);
                if (!v || *v < 1 || *v > (1u << 30))
                    throw ConfigError(loc, "duration must be a cycle count >= 1");
                duration = static_cast<int>(*v);
            } else if (key == "unitary") {
                unitary = value;
            } else if (key == "kind") {
                kind = to_lower(value);
            } else {
                throw ConfigError(loc, "unknown key '" + key + "'");
            }
        }
        if (!duration)
            throw ConfigError(loc, "missing duration=");
        e.duration = *duration;

        if (keyword == "measure" || keyword == "prep") {
            if (mapped->kind != OpKind::Single)
                throw ConfigError(loc, keyword + " requires a single-qubit name");
            if (unitary || kind)
                throw ConfigError(loc, keyword + " takes only duration=");
            e.role = keyword == "measure" ? GateRole::Measure : GateRole::Prepare;
            e.kind = OpKind::Single;
        } else if (keyword == "gate") {
            if (!kind || !unitary)
                throw ConfigError(loc, "gate requires kind= and unitary=");
            e.role = GateRole::Unitary;
            if (*kind == "single")
                e.kind = OpKind::Single;
            else if (*kind == "two")
                e.kind = OpKind::Two;
            else
                throw ConfigError(loc, "kind must be single or two");
            if (e.kind != mapped->kind)
                throw ConfigError(loc, "kind mismatch: opcode map says '" +
                                           std::string(op_kind_name(mapped->kind)) +
                                           "'");
            if (e.kind == OpKind::Single) {
                if (auto b = builtin_unitary2(*unitary)) {
                    e.u2 = *b;
                } else {
                    const auto elems = parse_matrix(*unitary, loc);
                    if (elems.size() != 4)
                        throw ConfigError(loc, "single-qubit gate needs a 2x2 matrix");
                    std::copy(elems.begin(), elems.end(), e.u2.begin());
                }
                if (!is_unitary(e.u2))
                    throw ConfigError(loc, "matrix for '" + name +
                                               "' is not unitary (tol 1e-9)");
            } else {
                if (auto b = builtin_unitary4(*unitary)) {
                    e.u4 = *b;
                } else {
                    const auto elems = parse_matrix(*unitary, loc);
                    if (elems.size() != 16)
                        throw ConfigError(loc, "two-qubit gate needs a 4x4 matrix");
                    std::copy(elems.begin(), elems.end(), e.u4.begin());
                }
                if (!is_unitary(e.u4))
                    throw ConfigError(loc, "matrix for '" + name +
                                               "' is not unitary (tol 1e-9)");
            }
        } else {
            throw ConfigError(loc, "expected gate/measure/prep, got '" +
                                       fields[0] + "'");
        }

        g.by_opcode_[mapped->opcode] = e;
        g.name_to_opcode_[name] = mapped->opcode;
    }
    return g;
}

const GateSemantics::Entry *GateSemantics::by_opcode(std::uint32_t opcode) const {
    const auto it = by_opcode_.find(opcode);
    return it == by_opcode_.end() ? nullptr : &it->second;
}

const GateSemantics::Entry *GateSemantics::by_name(std::string_view name) const {
    const auto it = name_to_opcode_.find(to_lower(name));
    return it == name_to_opcode_.end() ? nullptr : by_opcode(it->second);
}

// ---------------------------------------------------------------------------
// Built-in default configurations (mirrored as files under configs/)

std::string_view default_sim_qmap_text() {
    return R"(# Simulator-oriented quantum opcode map.

def_q_arg_none["qnop"] = 0x00

def_q_arg_st["prepz"]  = 0x02
def_q_arg_st["measz"]  = 0x06
def_q_arg_st["x"]      = 0x08
def_q_arg_st["y"]      = 0x09
def_q_arg_st["z"]      = 0x0a
def_q_arg_st["h"]      = 0x0b
def_q_arg_st["x90"]    = 0x0c
def_q_arg_st["y90"]    = 0x0d
def_q_arg_st["mx90"]   = 0x0e
def_q_arg_st["my90"]   = 0x0f
def_q_arg_st["sphase"] = 0x10
def_q_arg_st["tphase"] = 0x11

def_q_arg_tt["cz"]     = 0x80
def_q_arg_tt["cnot"]   = 0x81
def_q_arg_tt["swap"]   = 0x82
def_q_arg_tt["cu00"]   = 0x84
def_q_arg_tt["cu01"]   = 0x85
def_q_arg_tt["cu10"]   = 0x86
def_q_arg_tt["cu11"]   = 0x87
)";
}

std::string_view default_gate_semantics_text() {
    return R"(# Simulator semantics for the default opcode map.

prep    prepz duration=10
measure measz duration=20

gate x      kind=single unitary=X    duration=2
gate y      kind=single unitary=Y    duration=2
gate z      kind=single unitary=Z    duration=2
gate h      kind=single unitary=H    duration=2
gate x90    kind=single unitary=X90  duration=2
gate y90    kind=single unitary=Y90  duration=2
gate mx90   kind=single unitary=MX90 duration=2
gate my90   kind=single unitary=MY90 duration=2
gate sphase kind=single unitary=S    duration=2
gate tphase kind=single unitary=T    duration=2

gate cz     kind=two unitary=CZ   duration=2
gate cnot   kind=two unitary=CNOT duration=2
gate swap   kind=two unitary=SWAP duration=2
gate cu00   kind=two unitary=CU00 duration=2
gate cu01   kind=two unitary=CU01 duration=2
gate cu10   kind=two unitary=CU10 duration=2
gate cu11   kind=two unitary=CU11 duration=2
)";
}

std::string_view default_topology_text() {
    return R"(# Default qubit-pair ordering: the 8 ladder edges in both
# directions, mask bit = 2*edge + direction (0 = as listed).

pair 0  0 2
pair 1  2 0
pair 2  0 3
pair 3  3 0
pair 4  1 3
pair 5  3 1
pair 6  1 4
pair 7  4 1
pair 8  2 5
pair 9  5 2
pair 10 3 5
pair 11 5 3
pair 12 3 6
pair 13 6 3
pair 14 4 6
pair 15 6 4
)";
}

} // namespace eqasm
