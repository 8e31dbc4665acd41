#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eqasm/config.hpp"
#include "eqasm/error.hpp"
#include "eqasm/instruction.hpp"

namespace eqasm {

// ---------------------------------------------------------------------------
// Tokens

enum class TokenKind {
    Identifier,
    Register,      // r0..r31, s0..s31, t0..t31, q0..q6
    Integer,       // plain / 0x / 0b
    Directive,     // .register, .def_sym, .word
    OpcodeLiteral, // q#<n>, disassembler fallback for unmapped opcodes
    Comma,
    Colon,
    Pipe,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Minus,
    Eol,
    Eof,
};

enum class RegKind : std::uint8_t { R, S, T, Q };

char reg_kind_letter(RegKind k);

struct Token {
    TokenKind kind;
    std::string text; // original spelling, case preserved
    SourceLoc loc;

    std::uint64_t value = 0; // Integer / OpcodeLiteral payload
    int radix = 10;          // 10, 16 or 2

    RegKind reg_kind = RegKind::R;
    int reg_index = 0;
};

// Comments and blanks are stripped; identifiers keep their case (all
// matching downstream is case-insensitive). Both LF and CR+LF accepted.
std::vector<Token> tokenize(std::string_view source,
                            const std::string &filename = "");

// ---------------------------------------------------------------------------
// Parsed statements (unresolved program)

// A register operand: either a literal architectural register or an
// alias introduced by .register.
struct RegRef {
    bool is_symbol = false;
    RegKind kind = RegKind::R;
    int index = 0;
    std::string symbol; // lowercased alias name
    SourceLoc loc;

    bool same(const RegRef &o) const;
};

// An immediate operand: a literal value or a .def_sym alias.
struct ImmRef {
    bool is_symbol = false;
    std::int64_t value = 0;
    int radix = 10; // literals only; raw 0x/0b patterns fill signed fields
    std::string symbol;
    SourceLoc loc;

    bool same(const ImmRef &o) const;
};

struct MemRef {
    RegRef base;
    ImmRef offset;

    bool same(const MemRef &o) const;
};

using PairRef = std::pair<ImmRef, ImmRef>;

struct Operand {
    enum class Kind { Reg, Imm, Flag, Mem, QubitList, PairList };

    Kind kind;
    SourceLoc loc;
    RegRef reg;
    ImmRef imm;
    CompFlag flag = CompFlag::Always;
    MemRef mem;
    std::vector<ImmRef> qubits;
    std::vector<PairRef> pairs;

    bool same(const Operand &o) const;
};

struct RegisterAliasStmt {
    RegKind kind;
    int index;
    std::string alias; // lowercased
};

struct ConstAliasStmt {
    std::string alias;
    std::int64_t value;
};

struct LabelStmt {
    std::string name; // lowercased
};

// Single-format instruction or predefined macro, by (lowercased) name.
struct OpStmt {
    std::string name;
    std::vector<Operand> operands;
};

struct QuantumOpStmt {
    std::string name; // lowercased; empty when is_opcode_literal
    bool is_opcode_literal = false;
    std::uint32_t opcode_literal = 0;
    std::optional<RegRef> target; // absent for qnop
    SourceLoc loc;

    bool same(const QuantumOpStmt &o) const;
};

struct BundleStmt {
    int pi = 0;
    std::vector<QuantumOpStmt> ops;
};

// .word escape: emits the literal word (disassembler output for
// undecodable words).
struct WordStmt {
    std::uint32_t word;
};

struct Statement {
    std::variant<RegisterAliasStmt, ConstAliasStmt, LabelStmt, OpStmt,
                 BundleStmt, WordStmt>
        node;
    SourceLoc loc;

    // Structural equality, ignoring locations and literal radix.
    bool same(const Statement &o) const;
};

struct ParsedProgram {
    std::vector<Statement> statements;
    std::string filename;

    bool same(const ParsedProgram &o) const;
};

ParsedProgram parse_program(const std::vector<Token> &tokens,
                            const std::string &filename = "");

// Canonical text form; parsing it back yields a structurally equal
// program.
std::string pretty_print(const ParsedProgram &program);

// Replaces every predefined macro statement with its expansion;
// everything else passes through untouched.
ParsedProgram expand_macros(const ParsedProgram &program);

bool is_macro_name(std::string_view name);

// ---------------------------------------------------------------------------
// Resolved program

struct SymbolTables {
    std::map<std::string, std::pair<RegKind, int>> register_aliases;
    std::map<std::string, std::int64_t> const_aliases;
    std::map<std::string, std::uint32_t> labels; // byte addresses
};

struct ResolvedItem {
    Instruction instr;
    std::uint32_t address; // byte address, 4 * word index
    SourceLoc loc;
};

struct ResolvedProgram {
    std::vector<ResolvedItem> items;
    SymbolTables symbols;
    // .word escapes keep their exact bits (address -> word) even when
    // they only decode loosely.
    std::map<std::uint32_t, std::uint32_t> raw_words;
};

// Substitutes aliases, assigns word addresses, converts labels to BR
// offsets, checks quantum op names/kinds against the opcode map and
// translates qubit (pair) lists into masks.
ResolvedProgram resolve(const ParsedProgram &program, const OpcodeMap &opcodes,
                        const Topology &topology);

// Latency-compensation linter (straight-line): a CMP needs one unrelated
// instruction before a BR/FBR reads the flags; a measurement needs two
// before an FMR on the measured qubit.
std::vector<Diagnostic> lint_latency(const ResolvedProgram &program,
                                     const GateSemantics &gates);

std::vector<std::uint32_t> encode_program(const ResolvedProgram &program);

// Full pipeline: tokenize, parse, expand macros, resolve, encode.
struct Assembly {
    ParsedProgram parsed;
    ResolvedProgram resolved;
    std::vector<std::uint32_t> words;
};

Assembly assemble(std::string_view source, const OpcodeMap &opcodes,
                  const Topology &topology, const std::string &filename = "");

} // namespace eqasm
