#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqasm/error.hpp"

namespace eqasm {

enum class OpKind : std::uint8_t { None, Single, Two };

std::string_view op_kind_name(OpKind k);

// Quantum operation name -> 9-bit opcode map, loaded from a .qmap file
// (`def_q_arg_none/st/tt["name"] = N` lines). Names match
// case-insensitively; lookups take any case.
class OpcodeMap {
public:
    struct Entry {
        OpKind kind;
        std::uint32_t opcode;
    };

    static OpcodeMap parse_qmap(std::string_view text,
                                const std::string &filename = "",
                                std::vector<Diagnostic> *warnings = nullptr);

    void add(const std::string &name, OpKind kind, std::uint32_t opcode,
             const SourceLoc &loc = {});

    std::optional<Entry> lookup(std::string_view name) const;
    // Reverse lookup for the disassembler (first name wins on duplicates;
    // duplicates are rejected at load anyway).
    std::optional<std::string> name_of(std::uint32_t opcode) const;

    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, Entry> &entries() const { return entries_; }

    // Canonical text form; parse_qmap(to_qmap_text()) reproduces the map.
    std::string to_qmap_text() const;

private:
    std::map<std::string, Entry> entries_; // keyed by lowercased name
    std::map<std::uint32_t, std::string> by_opcode_;
};

using QubitPair = std::pair<int, int>; // (source, target), directed

// The 16 allowed directed qubit pairs and their SMIT mask bit indices.
class Topology {
public:
    // The documented default: the 8 ladder edges, both directions,
    // bit = 2*edge + direction (0 = as listed).
    static Topology default_topology();

    // `pair <index> <source> <target>` lines; must define all 16 indices.
    static Topology parse(std::string_view text,
                          const std::string &filename = "");

    std::optional<int> pair_index(int source, int target) const;
    const std::array<QubitPair, 16> &pairs() const { return pairs_; }

    std::string to_text() const;

private:
    std::array<QubitPair, 16> pairs_{};
    std::map<QubitPair, int> index_;
};

using Mat2 = std::array<std::complex<double>, 4>;   // row-major 2x2
using Mat4 = std::array<std::complex<double>, 16>;  // row-major 4x4

enum class GateRole : std::uint8_t { Unitary, Measure, Prepare };

// Simulator meaning of each configured operation: role, unitary and
// duration in cycles. Parsed against an OpcodeMap so kinds line up.
class GateSemantics {
public:
    struct Entry {
        GateRole role;
        OpKind kind;
        Mat2 u2{};    // valid when kind == Single && role == Unitary
        Mat4 u4{};    // valid when kind == Two
        int duration; // cycles, >= 1
    };

    static GateSemantics parse(std::string_view text, const OpcodeMap &ops,
                               const std::string &filename = "");

    const Entry *by_opcode(std::uint32_t opcode) const;
    const Entry *by_name(std::string_view name) const;
    const std::map<std::uint32_t, Entry> &entries() const { return by_opcode_; }

private:
    std::map<std::uint32_t, Entry> by_opcode_;
    std::map<std::string, std::uint32_t> name_to_opcode_;
};

// Named 2x2 builtins: I, X, Y, Z, H, X90, Y90, MX90, MY90, T, S.
std::optional<Mat2> builtin_unitary2(std::string_view name);
// Named 4x4 builtins: CZ, CNOT, SWAP, CU00, CU01, CU10, CU11.
std::optional<Mat4> builtin_unitary4(std::string_view name);

bool is_unitary(const Mat2 &m, double tol = 1e-9);
bool is_unitary(const Mat4 &m, double tol = 1e-9);

// Built-in fallback configurations used by the CLI when flags are
// omitted; configs/ ships the same content as files.
std::string_view default_gate_semantics_text();
std::string_view default_topology_text();
std::string_view default_sim_qmap_text();

} // namespace eqasm
