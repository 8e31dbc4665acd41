#include "eqasm/codec.hpp"

#include <string>

#include "eqasm/bits.hpp"

namespace eqasm {

namespace {

std::uint32_t low_bits(int n) { return n >= 32 ? ~0u : (1u << n) - 1; }

void require(bool ok, const std::string &what) {
    if (!ok)
        throw EncodeError(what);
}

std::uint32_t field(std::uint32_t value, int hi, int lo,
                    const std::string &what) {
    require(value <= low_bits(hi - lo + 1), what + " does not fit its field");
    return value << lo;
}

std::uint32_t reg5(std::uint8_t r, const std::string &what) {
    require(r < kNumGprs, what + " register index out of range");
    return r;
}

// Signed value -> raw field bits of the given width.
std::uint32_t signed_field(std::int64_t v, int width, const std::string &what) {
    const std::int64_t lo = -(std::int64_t(1) << (width - 1));
    const std::int64_t hi = (std::int64_t(1) << (width - 1)) - 1;
    require(v >= lo && v <= hi, what + " out of signed range");
    return static_cast<std::uint32_t>(v) & low_bits(width);
}

std::int32_t signed_of_field(std::uint32_t raw, int width) {
    if (raw & (1u << (width - 1)))
        return static_cast<std::int32_t>(raw) - (1 << width);
    return static_cast<std::int32_t>(raw);
}

struct Encoder {
    std::uint32_t operator()(const ins::Nop &) const {
        return major_opcode(Mnemonic::Nop) << 25;
    }
    std::uint32_t operator()(const ins::Stop &) const {
        return major_opcode(Mnemonic::Stop) << 25;
    }
    std::uint32_t operator()(const ins::Alu &i) const {
        return (major_opcode(alu_mnemonic(i.op)) << 25) |
               field(reg5(i.rd, "rd"), 24, 20, "rd") |
               field(reg5(i.rs, "rs"), 19, 15, "rs") |
               field(reg5(i.rt, "rt"), 14, 10, "rt");
    }
    std::uint32_t operator()(const ins::Not &i) const {
        return (major_opcode(Mnemonic::Not) << 25) |
               field(reg5(i.rd, "rd"), 24, 20, "rd") |
               field(reg5(i.rt, "rt"), 14, 10, "rt");
    }
    std::uint32_t operator()(const ins::Cmp &i) const {
        return (major_opcode(Mnemonic::Cmp) << 25) |
               field(reg5(i.rs, "rs"), 19, 15, "rs") |
               field(reg5(i.rt, "rt"), 14, 10, "rt");
    }
    std::uint32_t operator()(const ins::Br &i) const {
        // imm21 carries the 15-bit word offset sign-extended to 21 bits.
        require(i.offset_words >= -16384 && i.offset_words <= 16383,
                "branch offset out of 15-bit word range");
        const std::uint32_t imm21 =
            static_cast<std::uint32_t>(i.offset_words) & low_bits(21);
        return (major_opcode(Mnemonic::Br) << 25) | field(imm21, 24, 4, "imm21") |
               field(static_cast<std::uint32_t>(i.flag), 3, 0, "flag");
    }
    std::uint32_t operator()(const ins::Fbr &i) const {
        return (major_opcode(Mnemonic::Fbr) << 25) |
               field(reg5(i.rd, "rd"), 24, 20, "rd") |
               field(static_cast<std::uint32_t>(i.flag), 3, 0, "flag");
    }
    std::uint32_t operator()(const ins::Fmr &i) const {
        require(i.qubit < kNumQubits, "qubit index out of range");
        return (major_opcode(Mnemonic::Fmr) << 25) |
               field(reg5(i.rd, "rd"), 24, 20, "rd") |
               field(i.qubit, 2, 0, "qubit");
    }
    std::uint32_t operator()(const ins::Ld &i) const {
        return (major_opcode(Mnemonic::Ld) << 25) |
               field(reg5(i.rd, "rd"), 24, 20, "rd") |
               field(reg5(i.rt, "rt"), 14, 10, "rt") |
               field(signed_field(i.imm10, 10, "imm10"), 9, 0, "imm10");
    }
    std::uint32_t operator()(const ins::St &i) const {
        return (major_opcode(Mnemonic::St) << 25) |
               field(reg5(i.rs, "rs"), 19, 15, "rs") |
               field(reg5(i.rt, "rt"), 14, 10, "rt") |
               field(signed_field(i.imm10, 10, "imm10"), 9, 0, "imm10");
    }
    std::uint32_t operator()(const ins::Ldi &i) const {
        return (major_opcode(Mnemonic::Ldi) << 25) |
               field(reg5(i.rd, "rd"), 24, 20, "rd") |
               field(signed_field(i.imm20, 20, "imm20"), 19, 0, "imm20");
    }
    std::uint32_t operator()(const ins::Ldui &i) const {
        return (major_opcode(Mnemonic::Ldui) << 25) |
               field(reg5(i.rd, "rd"), 24, 20, "rd") |
               field(reg5(i.rs, "rs"), 19, 15, "rs") |
               field(i.imm15, 14, 0, "imm15");
    }
    std::uint32_t operator()(const ins::Qwait &i) const {
        return (major_opcode(Mnemonic::Qwait) << 25) |
               field(i.imm20, 19, 0, "imm20");
    }
    std::uint32_t operator()(const ins::Qwaitr &i) const {
        return (major_opcode(Mnemonic::Qwaitr) << 25) |
               field(reg5(i.rs, "rs"), 19, 15, "rs");
    }
    std::uint32_t operator()(const ins::Smis &i) const {
        require(i.sd < kNumTargetRegs, "sd register index out of range");
        require(i.mask7 <= 0x7F, "smis mask does not fit 7 bits");
        return (major_opcode(Mnemonic::Smis) << 25) | field(i.sd, 24, 19, "sd") |
               field(i.mask7, 6, 0, "imm7");
    }
    std::uint32_t operator()(const ins::Smit &i) const {
        require(i.td < kNumTargetRegs, "td register index out of range");
        return (major_opcode(Mnemonic::Smit) << 25) | field(i.td, 24, 19, "td") |
               field(i.mask16, 15, 0, "imm16");
    }
    std::uint32_t operator()(const ins::BundleWord &i) const {
        require(i.pi <= 7, "bundle pre-interval out of range");
        require(i.op0.opcode <= kMaxQuantumOpcode &&
                    i.op1.opcode <= kMaxQuantumOpcode,
                "quantum opcode does not fit 9 bits");
        require(i.op0.target < kNumTargetRegs && i.op1.target < kNumTargetRegs,
                "bundle target register out of range");
        return 0x80000000u | field(i.op0.opcode, 30, 22, "q_opcode_0") |
               field(i.op0.target, 21, 17, "target_0") |
               field(i.op1.opcode, 16, 8, "q_opcode_1") |
               field(i.op1.target, 7, 3, "target_1") | field(i.pi, 2, 0, "pi");
    }
};

std::uint32_t bits_of(std::uint32_t word, int hi, int lo) {
    return (word >> lo) & low_bits(hi - lo + 1);
}

void check_reserved(std::uint32_t word, int hi, int lo, DecodeMode mode,
                    long idx) {
    if (mode == DecodeMode::Strict && bits_of(word, hi, lo) != 0)
        throw DecodeError("nonzero reserved bits " + std::to_string(hi) + ".." +
                              std::to_string(lo),
                          idx);
}

CompFlag decode_flag(std::uint32_t word, long idx) {
    const std::uint32_t code = bits_of(word, 3, 0);
    if (code >= kNumCompFlags)
        throw DecodeError("invalid comparison flag code " + std::to_string(code),
                          idx);
    return static_cast<CompFlag>(code);
}

} // namespace

Mnemonic alu_mnemonic(ins::AluOp op) {
    switch (op) {
    case ins::AluOp::Add: return Mnemonic::Add;
    case ins::AluOp::Sub: return Mnemonic::Sub;
    case ins::AluOp::And: return Mnemonic::And;
    case ins::AluOp::Or: return Mnemonic::Or;
    case ins::AluOp::Xor: return Mnemonic::Xor;
    }
    throw EncodeError("bad AluOp");
}

std::uint32_t encode(const Instruction &instr) {
    return std::visit(Encoder{}, instr);
}

Instruction decode(std::uint32_t word, DecodeMode mode, long idx) {
    if (word & 0x80000000u) {
        return ins::BundleWord{
            static_cast<std::uint8_t>(bits_of(word, 2, 0)),
            {static_cast<std::uint16_t>(bits_of(word, 30, 22)),
             static_cast<std::uint8_t>(bits_of(word, 21, 17))},
            {static_cast<std::uint16_t>(bits_of(word, 16, 8)),
             static_cast<std::uint8_t>(bits_of(word, 7, 3))}};
    }

    const std::uint32_t op7 = bits_of(word, 31, 25);
    const auto m = mnemonic_from_major_opcode(op7);
    if (!m)
        throw DecodeError("unknown 7-bit opcode 0b" +
                              BitString::of(op7, 7).to_string(),
                          idx);

    const auto rd = static_cast<std::uint8_t>(bits_of(word, 24, 20));
    const auto rs = static_cast<std::uint8_t>(bits_of(word, 19, 15));
    const auto rt = static_cast<std::uint8_t>(bits_of(word, 14, 10));

    switch (*m) {
    case Mnemonic::Nop:
        check_reserved(word, 24, 0, mode, idx);
        return ins::Nop{};
    case Mnemonic::Stop:
        check_reserved(word, 24, 0, mode, idx);
        return ins::Stop{};
    case Mnemonic::Add:
    case Mnemonic::Sub:
    case Mnemonic::And:
    case Mnemonic::Or:
    case Mnemonic::Xor: {
        check_reserved(word, 9, 0, mode, idx);
        ins::AluOp op = *m == Mnemonic::Add   ? ins::AluOp::Add
                        : *m == Mnemonic::Sub ? ins::AluOp::Sub
                        : *m == Mnemonic::And ? ins::AluOp::And
                        : *m == Mnemonic::Or  ? ins::AluOp::Or
                                              : ins::AluOp::Xor;
        return ins::Alu{op, rd, rs, rt};
    }
    case Mnemonic::Not:
        check_reserved(word, 19, 15, mode, idx);
        check_reserved(word, 9, 0, mode, idx);
        return ins::Not{rd, rt};
    case Mnemonic::Cmp:
        check_reserved(word, 24, 20, mode, idx);
        check_reserved(word, 9, 0, mode, idx);
        return ins::Cmp{rs, rt};
    case Mnemonic::Br: {
        const std::uint32_t imm21 = bits_of(word, 24, 4);
        const std::int32_t offset = signed_of_field(imm21 & low_bits(15), 15);
        if (mode == DecodeMode::Strict) {
            // The dead top bits must hold the sign extension.
            const std::uint32_t expect =
                static_cast<std::uint32_t>(offset) & low_bits(21);
            if (imm21 != expect)
                throw DecodeError("imm21 bits 20..15 are not the sign "
                                  "extension of the word offset",
                                  idx);
        }
        return ins::Br{decode_flag(word, idx), offset};
    }
    case Mnemonic::Fbr:
        check_reserved(word, 19, 4, mode, idx);
        return ins::Fbr{decode_flag(word, idx), rd};
    case Mnemonic::Fmr: {
        check_reserved(word, 19, 3, mode, idx);
        const std::uint32_t qi = bits_of(word, 2, 0);
        if (qi >= kNumQubits)
            throw DecodeError("qubit index 7 is not addressable", idx);
        return ins::Fmr{rd, static_cast<std::uint8_t>(qi)};
    }
    case Mnemonic::Ld:
        check_reserved(word, 19, 15, mode, idx);
        return ins::Ld{rd, rt, signed_of_field(bits_of(word, 9, 0), 10)};
    case Mnemonic::St:
        check_reserved(word, 24, 20, mode, idx);
        return ins::St{rs, rt, signed_of_field(bits_of(word, 9, 0), 10)};
    case Mnemonic::Ldi:
        return ins::Ldi{rd, signed_of_field(bits_of(word, 19, 0), 20)};
    case Mnemonic::Ldui:
        return ins::Ldui{rd, rs, bits_of(word, 14, 0)};
    case Mnemonic::Qwait:
        check_reserved(word, 24, 20, mode, idx);
        return ins::Qwait{bits_of(word, 19, 0)};
    case Mnemonic::Qwaitr:
        check_reserved(word, 24, 20, mode, idx);
        check_reserved(word, 14, 0, mode, idx);
        return ins::Qwaitr{rs};
    case Mnemonic::Smis: {
        check_reserved(word, 18, 7, mode, idx);
        const std::uint32_t sd = bits_of(word, 24, 19);
        if (sd >= kNumTargetRegs)
            throw DecodeError("s-register index " + std::to_string(sd) +
                                  " out of range",
                              idx);
        return ins::Smis{static_cast<std::uint8_t>(sd),
                         static_cast<std::uint8_t>(bits_of(word, 6, 0))};
    }
    case Mnemonic::Smit: {
        check_reserved(word, 18, 16, mode, idx);
        const std::uint32_t td = bits_of(word, 24, 19);
        if (td >= kNumTargetRegs)
            throw DecodeError("t-register index " + std::to_string(td) +
                                  " out of range",
                              idx);
        return ins::Smit{static_cast<std::uint8_t>(td),
                         static_cast<std::uint16_t>(bits_of(word, 15, 0))};
    }
    }
    throw DecodeError("unreachable", idx);
}

std::uint8_t compute_smis_mask(std::span<const int> qubits) {
    if (qubits.empty())
        throw ValueError("empty qubit list");
    std::uint8_t mask = 0;
    for (int q : qubits) {
        if (q < 0 || q >= kNumQubits)
            throw ValueError("qubit " + std::to_string(q) + " out of range 0..6");
        mask |= static_cast<std::uint8_t>(1u << q);
    }
    return mask;
}

std::uint16_t compute_smit_mask(std::span<const QubitPair> pairs,
                                const Topology &topo) {
    if (pairs.empty())
        throw ValueError("empty qubit-pair list");
    std::uint16_t mask = 0;
    for (const auto &p : pairs) {
        const auto idx = topo.pair_index(p.first, p.second);
        if (!idx)
            throw ValueError("qubit pair (" + std::to_string(p.first) + "," +
                             std::to_string(p.second) + ") not in topology");
        mask |= static_cast<std::uint16_t>(1u << *idx);
    }
    return mask;
}

std::vector<ins::BundleWord> pack_bundle(int pi,
                                         std::span<const ins::BundleOp> ops) {
    if (ops.empty())
        throw EncodeError("bundle must contain at least one operation");
    if (pi < 0 || pi > 7)
        throw EncodeError("bundle pre-interval must be 0..7");
    std::vector<ins::BundleWord> words;
    for (std::size_t i = 0; i < ops.size(); i += 2) {
        ins::BundleWord w{};
        w.pi = static_cast<std::uint8_t>(i == 0 ? pi : 0);
        w.op0 = ops[i];
        w.op1 = (i + 1 < ops.size()) ? ops[i + 1] : ins::BundleOp{0, 0};
        words.push_back(w);
    }
    return words;
}

std::int32_t encode_branch_offset(std::int64_t byte_delta) {
    if (byte_delta % 4 != 0)
        throw EncodeError("branch byte offset must be a multiple of 4");
    const std::int64_t words = byte_delta / 4;
    if (words < -16384 || words > 16383)
        throw EncodeError("branch offset " + std::to_string(words) +
                          " words exceeds the signed 15-bit range");
    return static_cast<std::int32_t>(words);
}

std::vector<std::uint8_t> image_to_bytes(std::span<const std::uint32_t> words,
                                         bool big_endian) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(words.size() * 4);
    for (std::uint32_t w : words) {
        if (big_endian) {
            bytes.push_back(static_cast<std::uint8_t>(w >> 24));
            bytes.push_back(static_cast<std::uint8_t>(w >> 16));
            bytes.push_back(static_cast<std::uint8_t>(w >> 8));
            bytes.push_back(static_cast<std::uint8_t>(w));
        } else {
            bytes.push_back(static_cast<std::uint8_t>(w));
            bytes.push_back(static_cast<std::uint8_t>(w >> 8));
            bytes.push_back(static_cast<std::uint8_t>(w >> 16));
            bytes.push_back(static_cast<std::uint8_t>(w >> 24));
        }
    }
    return bytes;
}

std::vector<std::uint32_t> image_from_bytes(std::span<const std::uint8_t> bytes,
                                            bool big_endian) {
    if (bytes.size() % 4 != 0)
        throw DecodeError("image length " + std::to_string(bytes.size()) +
                          " is not a multiple of 4");
    std::vector<std::uint32_t> words;
    words.reserve(bytes.size() / 4);
    for (std::size_t i = 0; i < bytes.size(); i += 4) {
        std::uint32_t w;
        if (big_endian)
            w = (std::uint32_t(bytes[i]) << 24) | (std::uint32_t(bytes[i + 1]) << 16) |
                (std::uint32_t(bytes[i + 2]) << 8) | bytes[i + 3];
        else
            w = std::uint32_t(bytes[i]) | (std::uint32_t(bytes[i + 1]) << 8) |
                (std::uint32_t(bytes[i + 2]) << 16) |
                (std::uint32_t(bytes[i + 3]) << 24);
        words.push_back(w);
    }
    return words;
}

} // namespace eqasm
