#pragma once

#include <cstdint>
#include <variant>

#include "eqasm/isa.hpp"

namespace eqasm {

// Decoded, validated instruction words. Fields use natural value types;
// the codec owns the bit placement.

namespace ins {

struct Nop {
    bool operator==(const Nop &) const = default;
};

struct Stop {
    bool operator==(const Stop &) const = default;
};

enum class AluOp : std::uint8_t { Add, Sub, And, Or, Xor };

// ADD/SUB/AND/OR/XOR rd, rs, rt
struct Alu {
    AluOp op;
    std::uint8_t rd, rs, rt;
    bool operator==(const Alu &) const = default;
};

struct Not {
    std::uint8_t rd, rt;
    bool operator==(const Not &) const = default;
};

struct Cmp {
    std::uint8_t rs, rt;
    bool operator==(const Cmp &) const = default;
};

// offset_words is the signed word offset consumed by the hardware
// (imm21's low 15 bits; the upper 6 carry its sign extension).
struct Br {
    CompFlag flag;
    std::int32_t offset_words;
    bool operator==(const Br &) const = default;
};

struct Fbr {
    CompFlag flag;
    std::uint8_t rd;
    bool operator==(const Fbr &) const = default;
};

struct Fmr {
    std::uint8_t rd;
    std::uint8_t qubit; // 0..6
    bool operator==(const Fmr &) const = default;
};

struct Ld {
    std::uint8_t rd, rt;
    std::int32_t imm10; // signed byte offset
    bool operator==(const Ld &) const = default;
};

struct St {
    std::uint8_t rs, rt;
    std::int32_t imm10;
    bool operator==(const St &) const = default;
};

struct Ldi {
    std::uint8_t rd;
    std::int32_t imm20; // signed, sign-extended to 32 at execution
    bool operator==(const Ldi &) const = default;
};

struct Ldui {
    std::uint8_t rd, rs;
    std::uint32_t imm15; // unsigned, lands in result bits 31..17
    bool operator==(const Ldui &) const = default;
};

struct Qwait {
    std::uint32_t imm20; // unsigned cycle count
    bool operator==(const Qwait &) const = default;
};

struct Qwaitr {
    std::uint8_t rs;
    bool operator==(const Qwaitr &) const = default;
};

struct Smis {
    std::uint8_t sd;    // 0..31 (6-bit field; 32..63 reject at decode)
    std::uint8_t mask7; // qubit selection mask
    bool operator==(const Smis &) const = default;
};

struct Smit {
    std::uint8_t td;
    std::uint16_t mask16; // qubit-pair selection mask
    bool operator==(const Smit &) const = default;
};

struct BundleOp {
    std::uint16_t opcode; // 9-bit quantum opcode, 0 = qnop
    std::uint8_t target;  // 5-bit S/T register index
    bool operator==(const BundleOp &) const = default;
};

struct BundleWord {
    std::uint8_t pi; // 0..7 pre-interval
    BundleOp op0, op1;
    bool operator==(const BundleWord &) const = default;
};

} // namespace ins

using Instruction =
    std::variant<ins::Nop, ins::Stop, ins::Alu, ins::Not, ins::Cmp, ins::Br,
                 ins::Fbr, ins::Fmr, ins::Ld, ins::St, ins::Ldi, ins::Ldui,
                 ins::Qwait, ins::Qwaitr, ins::Smis, ins::Smit,
                 ins::BundleWord>;

Mnemonic alu_mnemonic(ins::AluOp op);

} // namespace eqasm
