#include <algorithm>
#include <array>
#include <cassert>

#include "eqasm/codec.hpp"
#include "eqasm/frontend.hpp"
#include "eqasm/isa.hpp"

namespace eqasm {

// ---------------------------------------------------------------------------
// Macro expansion

namespace {

Operand flag_operand(CompFlag flag, const SourceLoc &loc) {
    Operand op;
    op.kind = Operand::Kind::Flag;
    op.flag = flag;
    op.loc = loc;
    return op;
}

Operand imm_operand(std::int64_t value, const SourceLoc &loc) {
    Operand op;
    op.kind = Operand::Kind::Imm;
    op.imm.value = value;
    op.imm.loc = loc;
    op.loc = loc;
    return op;
}

Statement make_op(const SourceLoc &loc, std::string name,
                  std::vector<Operand> operands) {
    Statement stmt;
    stmt.loc = loc;
    stmt.node = OpStmt{std::move(name), std::move(operands)};
    return stmt;
}

void check_arity(const OpStmt &op, std::size_t want, const SourceLoc &loc) {
    if (op.operands.size() != want)
        throw ParseError(loc, "macro '" + op.name + "' takes " +
                                  std::to_string(want) + " operands");
}

// The conditional-branch macros, by comparison flag.
std::optional<CompFlag> branch_macro_flag(const std::string &name) {
    if (name.size() < 2 || name[0] != 'b')
        return std::nullopt;
    return comp_flag_from_name(name.substr(1));
}

} // namespace

ParsedProgram expand_macros(const ParsedProgram &program) {
    ParsedProgram out;
    out.filename = program.filename;
    for (const auto &stmt : program.statements) {
        const auto *op = std::get_if<OpStmt>(&stmt.node);
        if (!op || !is_macro_name(op->name)) {
            out.statements.push_back(stmt);
            continue;
        }
        const auto &loc = stmt.loc;
        const std::string &name = op->name;

        if (name == "goto" || name == "brn") {
            check_arity(*op, 1, loc);
            const CompFlag flag =
                name == "goto" ? CompFlag::Always : CompFlag::Never;
            out.statements.push_back(
                make_op(loc, "br", {flag_operand(flag, loc), op->operands[0]}));
        } else if (auto flag = branch_macro_flag(name); flag && name != "br") {
            // beq/bne/blt/ble/bgt/bge/bltu/bleu/bgtu/bgeu
            check_arity(*op, 3, loc);
            out.statements.push_back(
                make_op(loc, "cmp", {op->operands[0], op->operands[1]}));
            out.statements.push_back(make_op(
                loc, "br", {flag_operand(*flag, loc), op->operands[2]}));
        } else if (name == "mov") {
            check_arity(*op, 2, loc);
            out.statements.push_back(
                make_op(loc, "ldi", {op->operands[0], imm_operand(0, loc)}));
            out.statements.push_back(make_op(
                loc, "add",
                {op->operands[0], op->operands[1], op->operands[0]}));
        } else if (name == "shl1" || name == "mult2") {
            check_arity(*op, 2, loc);
            out.statements.push_back(make_op(
                loc, "add",
                {op->operands[0], op->operands[1], op->operands[1]}));
        } else if (name == "nand" || name == "nor" || name == "xnor") {
            check_arity(*op, 3, loc);
            const std::string base = name == "nand" ? "and"
                                     : name == "nor" ? "or"
                                                     : "xor";
            out.statements.push_back(make_op(
                loc, base,
                {op->operands[0], op->operands[1], op->operands[2]}));
            out.statements.push_back(
                make_op(loc, "not", {op->operands[0], op->operands[0]}));
        } else {
            throw ParseError(loc, "internal: unhandled macro '" + name + "'");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Resolution

namespace {

std::size_t statement_words(const Statement &stmt) {
    if (std::holds_alternative<WordStmt>(stmt.node))
        return 1;
    if (const auto *b = std::get_if<BundleStmt>(&stmt.node))
        return (b->ops.size() + 1) / 2;
    if (std::holds_alternative<OpStmt>(stmt.node))
        return 1;
    return 0; // directives and labels emit nothing
}

struct Resolver {
    const OpcodeMap &opcodes;
    const Topology &topology;
    ResolvedProgram out;

    std::uint8_t resolve_reg(const RegRef &ref, RegKind want,
                             const char *what) const {
        RegKind kind = ref.kind;
        int index = ref.index;
        if (ref.is_symbol) {
            const auto it = out.symbols.register_aliases.find(ref.symbol);
            if (it == out.symbols.register_aliases.end())
                throw ParseError(ref.loc,
                                 "unknown identifier '" + ref.symbol + "'");
            kind = it->second.first;
            index = it->second.second;
        }
        if (kind != want)
            throw ParseError(ref.loc, std::string("expected ") + what +
                                          ", got " +
                                          reg_kind_letter(kind) +
                                          std::to_string(index));
        return static_cast<std::uint8_t>(index);
    }

    // Semantic value of an immediate for a w-bit field. Plain literals
    // (and .def_sym values) must lie in the field's numeric range;
    // radix-prefixed literals are raw bit patterns of the field.
    std::int64_t resolve_imm(const ImmRef &ref, int width, bool is_signed,
                             const char *what) const {
        std::int64_t value;
        int radix = ref.radix;
        if (ref.is_symbol) {
            const auto it = out.symbols.const_aliases.find(ref.symbol);
            if (it == out.symbols.const_aliases.end())
                throw ParseError(ref.loc,
                                 "unknown identifier '" + ref.symbol + "'");
            value = it->second;
            radix = 10;
        } else {
            value = ref.value;
        }

        const std::int64_t umax = (std::int64_t(1) << width) - 1;
        if (radix != 10) {
            if (value < 0 || value > umax)
                throw ParseError(ref.loc, std::string(what) + " pattern does "
                                              "not fit " +
                                              std::to_string(width) + " bits");
            if (is_signed && value >= (std::int64_t(1) << (width - 1)))
                value -= std::int64_t(1) << width;
            return value;
        }
        if (is_signed) {
            const std::int64_t lo = -(std::int64_t(1) << (width - 1));
            const std::int64_t hi = (std::int64_t(1) << (width - 1)) - 1;
            if (value < lo || value > hi)
                throw ParseError(ref.loc,
                                 std::string(what) + " value " +
                                     std::to_string(value) +
                                     " is outside the signed " +
                                     std::to_string(width) + "-bit range");
        } else {
            if (value < 0 || value > umax)
                throw ParseError(ref.loc,
                                 std::string(what) + " value " +
                                     std::to_string(value) +
                                     " is outside the unsigned " +
                                     std::to_string(width) + "-bit range");
        }
        return value;
    }

    int resolve_qubit(const ImmRef &ref) const {
        const std::int64_t v = resolve_imm(ref, 3, false, "qubit address");
        if (v >= kNumQubits)
            throw ParseError(ref.loc, "qubit address " + std::to_string(v) +
                                          " out of range 0..6");
        return static_cast<int>(v);
    }

    // BR target: label, const alias or literal word offset.
    std::int32_t resolve_branch(const ImmRef &ref,
                                std::uint32_t from_address) const {
        if (ref.is_symbol) {
            if (const auto it = out.symbols.labels.find(ref.symbol);
                it != out.symbols.labels.end()) {
                const std::int64_t delta =
                    std::int64_t(it->second) - std::int64_t(from_address);
                try {
                    return encode_branch_offset(delta);
                } catch (const EncodeError &e) {
                    throw ParseError(ref.loc, e.what());
                }
            }
            // fall through: maybe a .def_sym word offset
        }
        return static_cast<std::int32_t>(
            resolve_imm(ref, 15, true, "branch offset"));
    }

    ins::BundleOp resolve_quantum_op(const QuantumOpStmt &op) const {
        std::uint32_t opcode;
        OpKind kind;
        if (op.is_opcode_literal) {
            opcode = op.opcode_literal;
            // Kind unknown without a map entry; either target register
            // class is accepted.
            kind = op.target && !op.target->is_symbol &&
                           op.target->kind == RegKind::T
                       ? OpKind::Two
                       : OpKind::Single;
        } else if (op.name == "qnop") {
            return {0, 0};
        } else {
            const auto entry = opcodes.lookup(op.name);
            if (!entry)
                throw ParseError(op.loc, "unknown quantum operation '" +
                                             op.name + "'");
            opcode = entry->opcode;
            kind = entry->kind;
        }

        if (kind == OpKind::None) {
            if (op.target)
                throw ParseError(op.loc, "operation '" + op.name +
                                             "' takes no target");
            return {static_cast<std::uint16_t>(opcode), 0};
        }
        if (!op.target)
            throw ParseError(op.loc, "operation '" +
                                         (op.is_opcode_literal
                                              ? "q#" + std::to_string(opcode)
                                              : op.name) +
                                         "' needs a target register");

        std::uint8_t target;
        if (op.is_opcode_literal) {
            // s or t accepted; aliases resolve to either.
            RegKind k = op.target->kind;
            int index = op.target->index;
            if (op.target->is_symbol) {
                const auto it =
                    out.symbols.register_aliases.find(op.target->symbol);
                if (it == out.symbols.register_aliases.end())
                    throw ParseError(op.target->loc, "unknown identifier '" +
                                                         op.target->symbol +
                                                         "'");
                k = it->second.first;
                index = it->second.second;
            }
            if (k != RegKind::S && k != RegKind::T)
                throw ParseError(op.target->loc,
                                 "quantum operation target must be an s- or "
                                 "t-register");
            target = static_cast<std::uint8_t>(index);
        } else if (kind == OpKind::Single) {
            target = resolve_reg(*op.target, RegKind::S,
                                 "an s-register (single-qubit operation)");
        } else {
            target = resolve_reg(*op.target, RegKind::T,
                                 "a t-register (two-qubit operation)");
        }
        return {static_cast<std::uint16_t>(opcode), target};
    }

    void emit(Instruction instr, std::uint32_t address, const SourceLoc &loc) {
        out.items.push_back({std::move(instr), address, loc});
    }

    void lower(const Statement &stmt, std::uint32_t address) {
        const auto &loc = stmt.loc;
        if (const auto *w = std::get_if<WordStmt>(&stmt.node)) {
            // Raw escape word; kept opaque.
            try {
                emit(decode(w->word, DecodeMode::Permissive), address, loc);
            } catch (const DecodeError &) {
                // Not decodable; encode_program() re-emits the raw word.
                emit(ins::Nop{}, address, loc);
                out.raw_words[address] = w->word;
                return;
            }
            // Keep the exact bits even if the word decodes loosely.
            out.raw_words[address] = w->word;
            return;
        }
        if (const auto *b = std::get_if<BundleStmt>(&stmt.node)) {
            std::vector<ins::BundleOp> ops;
            ops.reserve(b->ops.size());
            for (const auto &qop : b->ops)
                ops.push_back(resolve_quantum_op(qop));
            const auto words = pack_bundle(b->pi, ops);
            std::uint32_t addr = address;
            for (const auto &word : words) {
                emit(word, addr, loc);
                addr += 4;
            }
            return;
        }
        const auto *op = std::get_if<OpStmt>(&stmt.node);
        if (!op)
            return;
        if (is_macro_name(op->name))
            throw ParseError(loc, "internal: macro '" + op->name +
                                      "' reached resolution unexpanded");

        const auto m = mnemonic_from_name(op->name);
        assert(m);
        const auto &ops = op->operands;
        switch (*m) {
        case Mnemonic::Nop:
            emit(ins::Nop{}, address, loc);
            return;
        case Mnemonic::Stop:
            emit(ins::Stop{}, address, loc);
            return;
        case Mnemonic::Add:
        case Mnemonic::Sub:
        case Mnemonic::And:
        case Mnemonic::Or:
        case Mnemonic::Xor: {
            const ins::AluOp alu = *m == Mnemonic::Add   ? ins::AluOp::Add
                                   : *m == Mnemonic::Sub ? ins::AluOp::Sub
                                   : *m == Mnemonic::And ? ins::AluOp::And
                                   : *m == Mnemonic::Or  ? ins::AluOp::Or
                                                         : ins::AluOp::Xor;
            emit(ins::Alu{alu, resolve_reg(ops[0].reg, RegKind::R, "a GPR"),
                          resolve_reg(ops[1].reg, RegKind::R, "a GPR"),
                          resolve_reg(ops[2].reg, RegKind::R, "a GPR")},
                 address, loc);
            return;
        }
        case Mnemonic::Not:
            emit(ins::Not{resolve_reg(ops[0].reg, RegKind::R, "a GPR"),
                          resolve_reg(ops[1].reg, RegKind::R, "a GPR")},
                 address, loc);
            return;
        case Mnemonic::Cmp:
            emit(ins::Cmp{resolve_reg(ops[0].reg, RegKind::R, "a GPR"),
                          resolve_reg(ops[1].reg, RegKind::R, "a GPR")},
                 address, loc);
            return;
        case Mnemonic::Br:
            emit(ins::Br{ops[0].flag, resolve_branch(ops[1].imm, address)},
                 address, loc);
            return;
        case Mnemonic::Fbr:
            emit(ins::Fbr{ops[0].flag,
                          resolve_reg(ops[1].reg, RegKind::R, "a GPR")},
                 address, loc);
            return;
        case Mnemonic::Fmr:
            emit(ins::Fmr{resolve_reg(ops[0].reg, RegKind::R, "a GPR"),
                          resolve_reg(ops[1].reg, RegKind::Q, "a qubit")},
                 address, loc);
            return;
        case Mnemonic::Ld:
            emit(ins::Ld{resolve_reg(ops[0].reg, RegKind::R, "a GPR"),
                         resolve_reg(ops[1].mem.base, RegKind::R, "a base GPR"),
                         static_cast<std::int32_t>(resolve_imm(
                             ops[1].mem.offset, 10, true, "memory offset"))},
                 address, loc);
            return;
        case Mnemonic::St:
            emit(ins::St{resolve_reg(ops[0].reg, RegKind::R, "a GPR"),
                         resolve_reg(ops[1].mem.base, RegKind::R, "a base GPR"),
                         static_cast<std::int32_t>(resolve_imm(
                             ops[1].mem.offset, 10, true, "memory offset"))},
                 address, loc);
            return;
        case Mnemonic::Ldi:
            emit(ins::Ldi{resolve_reg(ops[0].reg, RegKind::R, "a GPR"),
                          static_cast<std::int32_t>(resolve_imm(
                              ops[1].imm, 20, true, "immediate"))},
                 address, loc);
            return;
        case Mnemonic::Ldui:
            emit(ins::Ldui{resolve_reg(ops[0].reg, RegKind::R, "a GPR"),
                           resolve_reg(ops[1].reg, RegKind::R, "a GPR"),
                           static_cast<std::uint32_t>(resolve_imm(
                               ops[2].imm, 15, false, "immediate"))},
                 address, loc);
            return;
        case Mnemonic::Qwait:
            emit(ins::Qwait{static_cast<std::uint32_t>(resolve_imm(
                     ops[0].imm, 20, false, "wait interval"))},
                 address, loc);
            return;
        case Mnemonic::Qwaitr:
            emit(ins::Qwaitr{resolve_reg(ops[0].reg, RegKind::R, "a GPR")},
                 address, loc);
            return;
        case Mnemonic::Smis: {
            const std::uint8_t sd =
                resolve_reg(ops[0].reg, RegKind::S, "an s-register");
            std::uint8_t mask;
            if (ops[1].kind == Operand::Kind::Imm) {
                mask = static_cast<std::uint8_t>(
                    resolve_imm(ops[1].imm, 7, false, "qubit mask"));
            } else {
                std::vector<int> qubits;
                for (const auto &q : ops[1].qubits)
                    qubits.push_back(resolve_qubit(q));
                try {
                    mask = compute_smis_mask(qubits);
                } catch (const ValueError &e) {
                    throw ParseError(ops[1].loc, e.what());
                }
            }
            emit(ins::Smis{sd, mask}, address, loc);
            return;
        }
        case Mnemonic::Smit: {
            const std::uint8_t td =
                resolve_reg(ops[0].reg, RegKind::T, "a t-register");
            std::uint16_t mask;
            if (ops[1].kind == Operand::Kind::Imm) {
                mask = static_cast<std::uint16_t>(
                    resolve_imm(ops[1].imm, 16, false, "pair mask"));
            } else {
                std::vector<QubitPair> pairs;
                for (const auto &p : ops[1].pairs)
                    pairs.emplace_back(resolve_qubit(p.first),
                                       resolve_qubit(p.second));
                try {
                    mask = compute_smit_mask(pairs, topology);
                } catch (const ValueError &e) {
                    throw ParseError(ops[1].loc, e.what());
                }
            }
            emit(ins::Smit{td, mask}, address, loc);
            return;
        }
        }
    }
};

} // namespace

ResolvedProgram resolve(const ParsedProgram &program, const OpcodeMap &opcodes,
                        const Topology &topology) {
    Resolver r{opcodes, topology, {}};
    auto &symbols = r.out.symbols;

    // Directives and label addresses first (labels may be forward refs).
    std::uint32_t address = 0;
    for (const auto &stmt : program.statements) {
        if (const auto *a = std::get_if<RegisterAliasStmt>(&stmt.node)) {
            if (symbols.register_aliases.count(a->alias) ||
                symbols.const_aliases.count(a->alias))
                throw ParseError(stmt.loc,
                                 "alias '" + a->alias + "' redefined");
            if (opcodes.lookup(a->alias))
                throw ParseError(stmt.loc, "'" + a->alias +
                                               "' is a quantum operation name");
            symbols.register_aliases[a->alias] = {a->kind, a->index};
        } else if (const auto *c = std::get_if<ConstAliasStmt>(&stmt.node)) {
            if (symbols.register_aliases.count(c->alias) ||
                symbols.const_aliases.count(c->alias))
                throw ParseError(stmt.loc,
                                 "alias '" + c->alias + "' redefined");
            if (opcodes.lookup(c->alias))
                throw ParseError(stmt.loc, "'" + c->alias +
                                               "' is a quantum operation name");
            symbols.const_aliases[c->alias] = c->value;
        } else if (const auto *l = std::get_if<LabelStmt>(&stmt.node)) {
            symbols.labels[l->name] = address; // parser rejects duplicates
        }
        address += 4 * static_cast<std::uint32_t>(statement_words(stmt));
        if (address > kMaxImageBytes)
            throw EncodeError("program exceeds the 2^17-byte instruction "
                              "image limit");
    }
    for (const auto &[alias, unused] : symbols.register_aliases) {
        (void)unused;
        if (symbols.labels.count(alias))
            throw ParseError({program.filename, 0, 0},
                             "'" + alias + "' is both an alias and a label");
    }
    for (const auto &[alias, unused] : symbols.const_aliases) {
        (void)unused;
        if (symbols.labels.count(alias))
            throw ParseError({program.filename, 0, 0},
                             "'" + alias + "' is both an alias and a label");
    }

    address = 0;
    for (const auto &stmt : program.statements) {
        r.lower(stmt, address);
        address += 4 * static_cast<std::uint32_t>(statement_words(stmt));
    }
    return std::move(r.out);
}

std::vector<std::uint32_t> encode_program(const ResolvedProgram &program) {
    std::vector<std::uint32_t> words;
    words.reserve(program.items.size());
    for (const auto &item : program.items) {
        if (const auto raw = program.raw_words.find(item.address);
            raw != program.raw_words.end()) {
            words.push_back(raw->second);
            continue;
        }
        words.push_back(encode(item.instr));
    }
    if (words.size() * 4 > kMaxImageBytes)
        throw EncodeError("program exceeds the 2^17-byte instruction image "
                          "limit");
    return words;
}

// ---------------------------------------------------------------------------
// Latency linter

std::vector<Diagnostic> lint_latency(const ResolvedProgram &program,
                                     const GateSemantics &gates) {
    std::vector<Diagnostic> findings;
    constexpr long kFar = -1000000;
    long last_cmp = kFar;
    std::array<long, kNumQubits> last_meas;
    last_meas.fill(kFar);
    std::array<std::optional<std::uint8_t>, kNumTargetRegs> s_masks;

    for (long idx = 0; idx < static_cast<long>(program.items.size()); ++idx) {
        const auto &item = program.items[static_cast<std::size_t>(idx)];
        if (std::holds_alternative<ins::Cmp>(item.instr)) {
            last_cmp = idx;
        } else if (std::holds_alternative<ins::Br>(item.instr) ||
                   std::holds_alternative<ins::Fbr>(item.instr)) {
            if (idx - last_cmp < 2)
                findings.push_back(
                    {Severity::Warning, item.loc,
                     "comparison flags are read right after CMP; one "
                     "independent instruction is required in between"});
        } else if (const auto *smis = std::get_if<ins::Smis>(&item.instr)) {
            s_masks[smis->sd] = smis->mask7;
        } else if (const auto *fmr = std::get_if<ins::Fmr>(&item.instr)) {
            if (idx - last_meas[fmr->qubit] < 3)
                findings.push_back(
                    {Severity::Warning, item.loc,
                     "FMR reads the measurement of qubit " +
                         std::to_string(fmr->qubit) +
                         " too early; two independent instructions are "
                         "required after the measurement"});
        } else if (const auto *b = std::get_if<ins::BundleWord>(&item.instr)) {
            for (const auto &op : {b->op0, b->op1}) {
                if (op.opcode == 0)
                    continue;
                const auto *sem = gates.by_opcode(op.opcode);
                if (!sem || sem->role != GateRole::Measure)
                    continue;
                // Unknown mask contents: be conservative, mark all qubits.
                const std::uint8_t mask =
                    s_masks[op.target].value_or(std::uint8_t{0x7F});
                for (int q = 0; q < kNumQubits; ++q)
                    if (mask & (1u << q))
                        last_meas[static_cast<std::size_t>(q)] = idx;
            }
        }
    }
    return findings;
}

Assembly assemble(std::string_view source, const OpcodeMap &opcodes,
                  const Topology &topology, const std::string &filename) {
    Assembly result;
    result.parsed = parse_program(tokenize(source, filename), filename);
    result.resolved = resolve(expand_macros(result.parsed), opcodes, topology);
    result.words = encode_program(result.resolved);
    return result;
}

} // namespace eqasm
