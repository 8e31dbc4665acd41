#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>

#include "eqasm/frontend.hpp"
#include "eqasm/isa.hpp"

namespace eqasm {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Operand slots of the fixed instruction grammar.
enum class Slot {
    Gpr,       // r-register or alias
    QubitReg,  // q-register or alias
    SReg,      // s-register or alias
    TReg,      // t-register or alias
    Flag,      // comparison flag name
    Imm,       // [-]literal or alias
    Target,    // branch target: label, alias or [-]literal word offset
    Mem,       // base ( offset )
    QubitList, // {q, ...} or raw mask immediate
    PairList,  // {(s,t), ...} or raw mask immediate
};

struct Signature {
    std::vector<Slot> slots;
};

const std::map<std::string, Signature, std::less<>> &instruction_signatures() {
    static const std::map<std::string, Signature, std::less<>> table = {
        {"nop", {{}}},
        {"stop", {{}}},
        {"add", {{Slot::Gpr, Slot::Gpr, Slot::Gpr}}},
        {"sub", {{Slot::Gpr, Slot::Gpr, Slot::Gpr}}},
        {"and", {{Slot::Gpr, Slot::Gpr, Slot::Gpr}}},
        {"or", {{Slot::Gpr, Slot::Gpr, Slot::Gpr}}},
        {"xor", {{Slot::Gpr, Slot::Gpr, Slot::Gpr}}},
        {"not", {{Slot::Gpr, Slot::Gpr}}},
        {"cmp", {{Slot::Gpr, Slot::Gpr}}},
        {"br", {{Slot::Flag, Slot::Target}}},
        {"fbr", {{Slot::Flag, Slot::Gpr}}},
        {"fmr", {{Slot::Gpr, Slot::QubitReg}}},
        {"ld", {{Slot::Gpr, Slot::Mem}}},
        {"st", {{Slot::Gpr, Slot::Mem}}},
        {"ldi", {{Slot::Gpr, Slot::Imm}}},
        {"ldui", {{Slot::Gpr, Slot::Gpr, Slot::Imm}}},
        {"qwait", {{Slot::Imm}}},
        {"qwaitr", {{Slot::Gpr}}},
        {"smis", {{Slot::SReg, Slot::QubitList}}},
        {"smit", {{Slot::TReg, Slot::PairList}}},
    };
    return table;
}

const std::map<std::string, Signature, std::less<>> &macro_signatures() {
    static const std::map<std::string, Signature, std::less<>> table = {
        {"goto", {{Slot::Target}}},
        {"brn", {{Slot::Target}}},
        {"beq", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"bne", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"blt", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"ble", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"bgt", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"bge", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"bltu", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"bleu", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"bgtu", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"bgeu", {{Slot::Gpr, Slot::Gpr, Slot::Target}}},
        {"mov", {{Slot::Gpr, Slot::Gpr}}},
        {"shl1", {{Slot::Gpr, Slot::Gpr}}},
        {"mult2", {{Slot::Gpr, Slot::Gpr}}},
        {"nand", {{Slot::Gpr, Slot::Gpr, Slot::Gpr}}},
        {"nor", {{Slot::Gpr, Slot::Gpr, Slot::Gpr}}},
        {"xnor", {{Slot::Gpr, Slot::Gpr, Slot::Gpr}}},
    };
    return table;
}

bool is_reserved_word(std::string_view lowered) {
    if (mnemonic_from_name(lowered) || comp_flag_from_name(lowered))
        return true;
    if (macro_signatures().count(std::string(lowered)))
        return true;
    return lowered == "bs" || lowered == "qnop" || lowered == "register" ||
           lowered == "def_sym" || lowered == "word";
}

struct Parser {
    const std::vector<Token> &toks;
    std::string filename;
    std::size_t pos = 0;
    std::set<std::string> seen_labels;
    ParsedProgram out;

    const Token &cur() const { return toks[pos]; }

    const Token &next() {
        const Token &t = toks[pos];
        if (t.kind != TokenKind::Eof)
            ++pos;
        return t;
    }

    bool at(TokenKind k) const { return cur().kind == k; }

    const Token &expect(TokenKind k, const std::string &what) {
        if (!at(k))
            throw ParseError(cur().loc, "expected " + what + ", got '" +
                                            (cur().kind == TokenKind::Eol
                                                 ? std::string("end of line")
                                                 : cur().text) +
                                            "'");
        return next();
    }

    void expect_eol(const std::string &context) {
        if (!at(TokenKind::Eol) && !at(TokenKind::Eof))
            throw ParseError(cur().loc,
                             "unexpected '" + cur().text + "' after " + context);
        if (at(TokenKind::Eol))
            next();
    }

    // ---- operand helpers ----

    ImmRef parse_imm_ref() {
        ImmRef ref;
        ref.loc = cur().loc;
        bool neg = false;
        if (at(TokenKind::Minus)) {
            neg = true;
            next();
        }
        if (at(TokenKind::Integer)) {
            const Token &t = next();
            if (neg && t.radix != 10)
                throw ParseError(t.loc, "radix-prefixed literals are raw bit "
                                        "patterns and cannot be negated");
            if (t.value > static_cast<std::uint64_t>(
                              std::numeric_limits<std::int64_t>::max()))
                throw ParseError(t.loc, "integer literal too large");
            ref.value = static_cast<std::int64_t>(t.value);
            if (neg)
                ref.value = -ref.value;
            ref.radix = t.radix;
            return ref;
        }
        if (at(TokenKind::Identifier)) {
            if (neg)
                throw ParseError(cur().loc, "cannot negate an alias");
            const Token &t = next();
            ref.is_symbol = true;
            ref.symbol = to_lower(t.text);
            return ref;
        }
        throw ParseError(cur().loc, "expected an immediate value");
    }

    RegRef parse_reg_ref(RegKind want, const char *what) {
        RegRef ref;
        ref.loc = cur().loc;
        if (at(TokenKind::Register)) {
            const Token &t = next();
            if (t.reg_kind != want)
                throw ParseError(t.loc, std::string("expected ") + what +
                                            ", got '" + t.text + "'");
            ref.kind = t.reg_kind;
            ref.index = t.reg_index;
            return ref;
        }
        if (at(TokenKind::Identifier)) {
            const Token &t = next();
            ref.is_symbol = true;
            ref.kind = want;
            ref.symbol = to_lower(t.text);
            return ref;
        }
        throw ParseError(cur().loc,
                         std::string("expected ") + what + " or an alias");
    }

    Operand parse_operand(Slot slot) {
        Operand op;
        op.loc = cur().loc;
        switch (slot) {
        case Slot::Gpr:
            op.kind = Operand::Kind::Reg;
            op.reg = parse_reg_ref(RegKind::R, "a GPR (r0..r31)");
            return op;
        case Slot::QubitReg:
            op.kind = Operand::Kind::Reg;
            op.reg = parse_reg_ref(RegKind::Q, "a qubit (q0..q6)");
            return op;
        case Slot::SReg:
            op.kind = Operand::Kind::Reg;
            op.reg = parse_reg_ref(RegKind::S, "an s-register (s0..s31)");
            return op;
        case Slot::TReg:
            op.kind = Operand::Kind::Reg;
            op.reg = parse_reg_ref(RegKind::T, "a t-register (t0..t31)");
            return op;
        case Slot::Flag: {
            const Token &t = expect(TokenKind::Identifier, "a comparison flag");
            const auto flag = comp_flag_from_name(t.text);
            if (!flag)
                throw ParseError(t.loc,
                                 "unknown comparison flag '" + t.text + "'");
            op.kind = Operand::Kind::Flag;
            op.flag = *flag;
            return op;
        }
        case Slot::Imm:
        case Slot::Target:
            op.kind = Operand::Kind::Imm;
            op.imm = parse_imm_ref();
            return op;
        case Slot::Mem: {
            op.kind = Operand::Kind::Mem;
            op.mem.base = parse_reg_ref(RegKind::R, "a base GPR");
            expect(TokenKind::LParen, "'('");
            op.mem.offset = parse_imm_ref();
            expect(TokenKind::RParen, "')'");
            return op;
        }
        case Slot::QubitList: {
            if (!at(TokenKind::LBrace)) {
                // Raw mask immediate (also the disassembler's output form).
                op.kind = Operand::Kind::Imm;
                op.imm = parse_imm_ref();
                return op;
            }
            next();
            op.kind = Operand::Kind::QubitList;
            while (true) {
                op.qubits.push_back(parse_imm_ref());
                if (at(TokenKind::Comma)) {
                    next();
                    continue;
                }
                break;
            }
            expect(TokenKind::RBrace, "'}'");
            return op;
        }
        case Slot::PairList: {
            if (!at(TokenKind::LBrace)) {
                op.kind = Operand::Kind::Imm;
                op.imm = parse_imm_ref();
                return op;
            }
            next();
            op.kind = Operand::Kind::PairList;
            while (true) {
                expect(TokenKind::LParen, "'('");
                ImmRef src = parse_imm_ref();
                expect(TokenKind::Comma, "','");
                ImmRef tgt = parse_imm_ref();
                expect(TokenKind::RParen, "')'");
                op.pairs.emplace_back(std::move(src), std::move(tgt));
                if (at(TokenKind::Comma)) {
                    next();
                    continue;
                }
                break;
            }
            expect(TokenKind::RBrace, "'}'");
            return op;
        }
        }
        throw ParseError(cur().loc, "internal: bad operand slot");
    }

    OpStmt parse_op_stmt(const std::string &name, const Signature &sig) {
        OpStmt stmt;
        stmt.name = name;
        for (std::size_t i = 0; i < sig.slots.size(); ++i) {
            if (i > 0)
                expect(TokenKind::Comma, "','");
            stmt.operands.push_back(parse_operand(sig.slots[i]));
        }
        return stmt;
    }

    QuantumOpStmt parse_quantum_op() {
        QuantumOpStmt op;
        op.loc = cur().loc;
        if (at(TokenKind::OpcodeLiteral)) {
            const Token &t = next();
            op.is_opcode_literal = true;
            op.opcode_literal = static_cast<std::uint32_t>(t.value);
        } else {
            const Token &t = expect(TokenKind::Identifier,
                                    "a quantum operation name");
            op.name = to_lower(t.text);
            if (op.name == "qnop") {
                if (at(TokenKind::Register) || at(TokenKind::Identifier))
                    throw ParseError(cur().loc, "qnop takes no target");
                return op;
            }
        }
        // Target: s/t register or an alias. Absent for no-argument
        // operations (resolution checks the kind).
        RegRef target;
        target.loc = cur().loc;
        if (at(TokenKind::Register)) {
            const Token &t = next();
            if (t.reg_kind != RegKind::S && t.reg_kind != RegKind::T)
                throw ParseError(t.loc, "quantum operation target must be an "
                                        "s- or t-register, got '" +
                                            t.text + "'");
            target.kind = t.reg_kind;
            target.index = t.reg_index;
        } else if (at(TokenKind::Identifier)) {
            const Token &t = next();
            target.is_symbol = true;
            target.kind = RegKind::S; // refined at resolution
            target.symbol = to_lower(t.text);
        } else {
            return op; // no target
        }
        op.target = std::move(target);
        return op;
    }

    BundleStmt parse_bundle(int pi) {
        BundleStmt b;
        b.pi = pi;
        b.ops.push_back(parse_quantum_op());
        while (at(TokenKind::Pipe)) {
            next();
            b.ops.push_back(parse_quantum_op());
        }
        return b;
    }

    int parse_pi(const Token &t) {
        if (t.value > 7)
            throw ParseError(t.loc, "bundle pre-interval must be 0..7");
        return static_cast<int>(t.value);
    }

    // One machine-operation statement (single-format instruction, macro
    // or quantum bundle).
    Statement parse_machine_statement() {
        Statement stmt;
        stmt.loc = cur().loc;

        if (at(TokenKind::Integer)) {
            // "PI, op | op" bundle form.
            const Token &t = next();
            const int pi = parse_pi(t);
            expect(TokenKind::Comma, "',' after the bundle pre-interval");
            stmt.node = parse_bundle(pi);
            return stmt;
        }

        if (at(TokenKind::OpcodeLiteral)) {
            stmt.node = parse_bundle(0);
            return stmt;
        }

        const Token &head = expect(TokenKind::Identifier, "an instruction");
        const std::string name = to_lower(head.text);

        if (name == "bs") {
            // "bs PI op | op" spelling.
            const Token &t = expect(TokenKind::Integer,
                                    "a pre-interval after 'bs'");
            const int pi = parse_pi(t);
            if (at(TokenKind::Comma))
                next();
            stmt.node = parse_bundle(pi);
            return stmt;
        }

        if (const auto &insns = instruction_signatures();
            insns.count(name)) {
            stmt.node = parse_op_stmt(name, insns.at(name));
            return stmt;
        }
        if (const auto &macros = macro_signatures(); macros.count(name)) {
            stmt.node = parse_op_stmt(name, macros.at(name));
            return stmt;
        }

        // Anything else is a quantum operation name: rewind and parse as
        // a bundle with no pre-interval.
        --pos;
        stmt.node = parse_bundle(0);
        return stmt;
    }

    void parse_directive() {
        const Token &d = next();
        const std::string name = to_lower(d.text);
        Statement stmt;
        stmt.loc = d.loc;

        if (name == ".register") {
            const Token &reg = expect(TokenKind::Register,
                                      "an architectural register");
            const Token &alias = expect(TokenKind::Identifier, "an alias name");
            const std::string alias_low = to_lower(alias.text);
            if (is_reserved_word(alias_low))
                throw ParseError(alias.loc, "'" + alias.text +
                                                "' is a reserved word");
            stmt.node = RegisterAliasStmt{reg.reg_kind, reg.reg_index,
                                          alias_low};
        } else if (name == ".def_sym") {
            const Token &alias = expect(TokenKind::Identifier, "an alias name");
            const std::string alias_low = to_lower(alias.text);
            if (is_reserved_word(alias_low))
                throw ParseError(alias.loc, "'" + alias.text +
                                                "' is a reserved word");
            const ImmRef value = parse_imm_ref();
            if (value.is_symbol)
                throw ParseError(value.loc,
                                 ".def_sym takes a literal value");
            stmt.node = ConstAliasStmt{alias_low, value.value};
        } else if (name == ".word") {
            const ImmRef value = parse_imm_ref();
            if (value.is_symbol || value.value < 0 ||
                value.value > 0xFFFFFFFFll)
                throw ParseError(value.loc, ".word takes a 32-bit literal");
            stmt.node = WordStmt{static_cast<std::uint32_t>(value.value)};
        } else {
            throw ParseError(d.loc, "unknown directive '" + d.text + "'");
        }
        out.statements.push_back(std::move(stmt));
        expect_eol("the directive");
    }

    ParsedProgram run() {
        while (!at(TokenKind::Eof)) {
            if (at(TokenKind::Eol)) {
                next();
                continue;
            }
            if (at(TokenKind::Directive)) {
                parse_directive();
                continue;
            }

            // Label?
            if (at(TokenKind::Identifier) &&
                toks[pos + 1].kind == TokenKind::Colon) {
                const Token &label = next();
                next(); // ':'
                const std::string low = to_lower(label.text);
                if (is_reserved_word(low))
                    throw ParseError(label.loc, "'" + label.text +
                                                    "' is a reserved word");
                if (!seen_labels.insert(low).second)
                    throw ParseError(label.loc, "duplicate label '" +
                                                    label.text + "'");
                Statement stmt;
                stmt.loc = label.loc;
                stmt.node = LabelStmt{low};
                out.statements.push_back(std::move(stmt));

                if (at(TokenKind::Eol) || at(TokenKind::Eof)) {
                    expect_eol("the label");
                    continue;
                }
                if (at(TokenKind::Directive))
                    throw ParseError(cur().loc, "a label may only be followed "
                                                "by a machine operation");
                if (at(TokenKind::Identifier) &&
                    toks[pos + 1].kind == TokenKind::Colon)
                    throw ParseError(cur().loc, "only one label per line");
                out.statements.push_back(parse_machine_statement());
                expect_eol("the statement");
                continue;
            }

            out.statements.push_back(parse_machine_statement());
            expect_eol("the statement");
        }
        return std::move(out);
    }
};

} // namespace

bool is_macro_name(std::string_view name) {
    return macro_signatures().count(std::string(to_lower(name))) > 0;
}

ParsedProgram parse_program(const std::vector<Token> &tokens,
                            const std::string &filename) {
    Parser parser{tokens, filename, 0, {}, {}};
    parser.out.filename = filename;
    return parser.run();
}

// ---------------------------------------------------------------------------
// Structural equality (ignores source locations and literal radix)

bool RegRef::same(const RegRef &o) const {
    if (is_symbol != o.is_symbol)
        return false;
    return is_symbol ? symbol == o.symbol
                     : (kind == o.kind && index == o.index);
}

bool ImmRef::same(const ImmRef &o) const {
    if (is_symbol != o.is_symbol)
        return false;
    return is_symbol ? symbol == o.symbol : value == o.value;
}

bool MemRef::same(const MemRef &o) const {
    return base.same(o.base) && offset.same(o.offset);
}

bool Operand::same(const Operand &o) const {
    if (kind != o.kind)
        return false;
    switch (kind) {
    case Kind::Reg: return reg.same(o.reg);
    case Kind::Imm: return imm.same(o.imm);
    case Kind::Flag: return flag == o.flag;
    case Kind::Mem: return mem.same(o.mem);
    case Kind::QubitList: {
        if (qubits.size() != o.qubits.size())
            return false;
        for (std::size_t i = 0; i < qubits.size(); ++i)
            if (!qubits[i].same(o.qubits[i]))
                return false;
        return true;
    }
    case Kind::PairList: {
        if (pairs.size() != o.pairs.size())
            return false;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (!pairs[i].first.same(o.pairs[i].first) ||
                !pairs[i].second.same(o.pairs[i].second))
                return false;
        return true;
    }
    }
    return false;
}

bool QuantumOpStmt::same(const QuantumOpStmt &o) const {
    if (is_opcode_literal != o.is_opcode_literal)
        return false;
    if (is_opcode_literal && opcode_literal != o.opcode_literal)
        return false;
    if (!is_opcode_literal && name != o.name)
        return false;
    if (target.has_value() != o.target.has_value())
        return false;
    return !target || target->same(*o.target);
}

bool Statement::same(const Statement &o) const {
    if (node.index() != o.node.index())
        return false;
    if (const auto *a = std::get_if<RegisterAliasStmt>(&node)) {
        const auto &b = std::get<RegisterAliasStmt>(o.node);
        return a->kind == b.kind && a->index == b.index && a->alias == b.alias;
    }
    if (const auto *a = std::get_if<ConstAliasStmt>(&node)) {
        const auto &b = std::get<ConstAliasStmt>(o.node);
        return a->alias == b.alias && a->value == b.value;
    }
    if (const auto *a = std::get_if<LabelStmt>(&node)) {
        return a->name == std::get<LabelStmt>(o.node).name;
    }
    if (const auto *a = std::get_if<OpStmt>(&node)) {
        const auto &b = std::get<OpStmt>(o.node);
        if (a->name != b.name || a->operands.size() != b.operands.size())
            return false;
        for (std::size_t i = 0; i < a->operands.size(); ++i)
            if (!a->operands[i].same(b.operands[i]))
                return false;
        return true;
    }
    if (const auto *a = std::get_if<BundleStmt>(&node)) {
        const auto &b = std::get<BundleStmt>(o.node);
        if (a->pi != b.pi || a->ops.size() != b.ops.size())
            return false;
        for (std::size_t i = 0; i < a->ops.size(); ++i)
            if (!a->ops[i].same(b.ops[i]))
                return false;
        return true;
    }
    if (const auto *a = std::get_if<WordStmt>(&node)) {
        return a->word == std::get<WordStmt>(o.node).word;
    }
    return false;
}

bool ParsedProgram::same(const ParsedProgram &o) const {
    if (statements.size() != o.statements.size())
        return false;
    for (std::size_t i = 0; i < statements.size(); ++i)
        if (!statements[i].same(o.statements[i]))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Pretty printer (canonical lowercase text; reparsing yields a
// structurally equal program)

namespace {

std::string render_imm(const ImmRef &imm) {
    if (imm.is_symbol)
        return imm.symbol;
    if (imm.radix == 16 && imm.value >= 0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "0x%llx",
                      static_cast<unsigned long long>(imm.value));
        return buf;
    }
    return std::to_string(imm.value);
}

std::string render_reg(const RegRef &reg) {
    if (reg.is_symbol)
        return reg.symbol;
    return std::string(1, reg_kind_letter(reg.kind)) +
           std::to_string(reg.index);
}

std::string render_operand(const Operand &op) {
    switch (op.kind) {
    case Operand::Kind::Reg: return render_reg(op.reg);
    case Operand::Kind::Imm: return render_imm(op.imm);
    case Operand::Kind::Flag: return std::string(comp_flag_name(op.flag));
    case Operand::Kind::Mem:
        return render_reg(op.mem.base) + "(" + render_imm(op.mem.offset) + ")";
    case Operand::Kind::QubitList: {
        std::string s = "{";
        for (std::size_t i = 0; i < op.qubits.size(); ++i) {
            if (i)
                s += ", ";
            s += render_imm(op.qubits[i]);
        }
        return s + "}";
    }
    case Operand::Kind::PairList: {
        std::string s = "{";
        for (std::size_t i = 0; i < op.pairs.size(); ++i) {
            if (i)
                s += ", ";
            s += "(" + render_imm(op.pairs[i].first) + ", " +
                 render_imm(op.pairs[i].second) + ")";
        }
        return s + "}";
    }
    }
    return "?";
}

std::string render_quantum_op(const QuantumOpStmt &op) {
    std::string s = op.is_opcode_literal
                        ? "q#" + std::to_string(op.opcode_literal)
                        : op.name;
    if (op.target)
        s += " " + render_reg(*op.target);
    return s;
}

} // namespace

std::string pretty_print(const ParsedProgram &program) {
    std::ostringstream os;
    for (const auto &stmt : program.statements) {
        if (const auto *a = std::get_if<RegisterAliasStmt>(&stmt.node)) {
            os << ".register " << reg_kind_letter(a->kind) << a->index << ' '
               << a->alias << '\n';
        } else if (const auto *c = std::get_if<ConstAliasStmt>(&stmt.node)) {
            os << ".def_sym " << c->alias << ' ' << c->value << '\n';
        } else if (const auto *l = std::get_if<LabelStmt>(&stmt.node)) {
            os << l->name << ":\n";
        } else if (const auto *op = std::get_if<OpStmt>(&stmt.node)) {
            os << op->name;
            for (std::size_t i = 0; i < op->operands.size(); ++i)
                os << (i ? ", " : " ") << render_operand(op->operands[i]);
            os << '\n';
        } else if (const auto *b = std::get_if<BundleStmt>(&stmt.node)) {
            os << b->pi << ", ";
            for (std::size_t i = 0; i < b->ops.size(); ++i) {
                if (i)
                    os << " | ";
                os << render_quantum_op(b->ops[i]);
            }
            os << '\n';
        } else if (const auto *w = std::get_if<WordStmt>(&stmt.node)) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "0x%08x", w->word);
            os << ".word " << buf << '\n';
        }
    }
    return os.str();
}

} // namespace eqasm
