#include "eqasm/disasm.hpp"

#include <cstdio>
#include <sstream>

namespace eqasm {

namespace {

std::string reg(char letter, unsigned index) {
    return std::string(1, letter) + std::to_string(index);
}

std::string hex_imm(std::uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%x", v);
    return buf;
}

std::string render_bundle_op(const ins::BundleOp &op, const OpcodeMap *names) {
    if (op.opcode == 0 && op.target == 0)
        return "qnop";
    std::string target_letter = "s";
    std::string name;
    if (names) {
        if (const auto n = names->name_of(op.opcode)) {
            const auto entry = names->lookup(*n);
            if (entry && entry->kind == OpKind::None) {
                // No-argument op; a stray target needs the literal form
                // to keep the exact bits.
                if (op.target == 0)
                    return *n;
            } else {
                name = *n;
                if (entry && entry->kind == OpKind::Two)
                    target_letter = "t";
            }
        }
    }
    if (name.empty())
        name = "q#" + std::to_string(op.opcode);
    return name + " " + target_letter + std::to_string(op.target);
}

struct Renderer {
    const OpcodeMap *names;

    std::string operator()(const ins::Nop &) const { return "nop"; }
    std::string operator()(const ins::Stop &) const { return "stop"; }
    std::string operator()(const ins::Alu &i) const {
        return std::string(mnemonic_name(alu_mnemonic(i.op))) + " " +
               reg('r', i.rd) + ", " + reg('r', i.rs) + ", " + reg('r', i.rt);
    }
    std::string operator()(const ins::Not &i) const {
        return "not " + reg('r', i.rd) + ", " + reg('r', i.rt);
    }
    std::string operator()(const ins::Cmp &i) const {
        return "cmp " + reg('r', i.rs) + ", " + reg('r', i.rt);
    }
    std::string operator()(const ins::Br &i) const {
        return "br " + std::string(comp_flag_name(i.flag)) + ", " +
               std::to_string(i.offset_words);
    }
    std::string operator()(const ins::Fbr &i) const {
        return "fbr " + std::string(comp_flag_name(i.flag)) + ", " +
               reg('r', i.rd);
    }
    std::string operator()(const ins::Fmr &i) const {
        return "fmr " + reg('r', i.rd) + ", " + reg('q', i.qubit);
    }
    std::string operator()(const ins::Ld &i) const {
        return "ld " + reg('r', i.rd) + ", " + reg('r', i.rt) + "(" +
               std::to_string(i.imm10) + ")";
    }
    std::string operator()(const ins::St &i) const {
        return "st " + reg('r', i.rs) + ", " + reg('r', i.rt) + "(" +
               std::to_string(i.imm10) + ")";
    }
    std::string operator()(const ins::Ldi &i) const {
        return "ldi " + reg('r', i.rd) + ", " + std::to_string(i.imm20);
    }
    std::string operator()(const ins::Ldui &i) const {
        return "ldui " + reg('r', i.rd) + ", " + reg('r', i.rs) + ", " +
               std::to_string(i.imm15);
    }
    std::string operator()(const ins::Qwait &i) const {
        return "qwait " + std::to_string(i.imm20);
    }
    std::string operator()(const ins::Qwaitr &i) const {
        return "qwaitr " + reg('r', i.rs);
    }
    std::string operator()(const ins::Smis &i) const {
        if (i.mask7 == 0)
            return "smis " + reg('s', i.sd) + ", 0x0";
        std::string list = "{";
        bool first = true;
        for (int q = 0; q < kNumQubits; ++q) {
            if (i.mask7 & (1u << q)) {
                if (!first)
                    list += ", ";
                list += std::to_string(q);
                first = false;
            }
        }
        return "smis " + reg('s', i.sd) + ", " + list + "}";
    }
    std::string operator()(const ins::Smit &i) const {
        // No topology at disassembly time; emit the raw mask.
        return "smit " + reg('t', i.td) + ", " + hex_imm(i.mask16);
    }
    std::string operator()(const ins::BundleWord &i) const {
        std::string s = std::to_string(i.pi) + ", " +
                        render_bundle_op(i.op0, names);
        if (!(i.op1.opcode == 0 && i.op1.target == 0))
            s += " | " + render_bundle_op(i.op1, names);
        return s;
    }
};

} // namespace

std::string render_instruction(const Instruction &instr,
                               const OpcodeMap *names) {
    return std::visit(Renderer{names}, instr);
}

std::string disassemble(std::span<const std::uint32_t> words,
                        const OpcodeMap &names, DecodeMode mode) {
    std::ostringstream os;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::uint32_t word = words[i];
        std::string text;
        try {
            const Instruction instr =
                decode(word, mode, static_cast<long>(i));
            if (encode(instr) == word)
                text = render_instruction(instr, &names);
        } catch (const DecodeError &) {
            if (mode == DecodeMode::Strict)
                throw;
        }
        if (text.empty()) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "0x%08x", word);
            text = std::string(".word ") + buf;
        }
        os << text << '\n';
    }
    return os.str();
}

} // namespace eqasm
