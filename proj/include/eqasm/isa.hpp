#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace eqasm {

// Comparison flags in table order; the enum value is the 4-bit code used
// in BR/FBR encodings.
enum class CompFlag : std::uint8_t {
    Always = 0,
    Never = 1,
    Eq = 2,
    Ne = 3,
    Ltu = 4,
    Geu = 5,
    Leu = 6,
    Gtu = 7,
    Lt = 8,
    Ge = 9,
    Le = 10,
    Gt = 11,
};

inline constexpr int kNumCompFlags = 12;

std::string_view comp_flag_name(CompFlag f);
std::optional<CompFlag> comp_flag_from_name(std::string_view name);

// Single-format mnemonics (quantum bundles are a separate word format
// selected by the MSb).
enum class Mnemonic : std::uint8_t {
    Nop,
    Stop,
    Add,
    Sub,
    And,
    Or,
    Xor,
    Not,
    Cmp,
    Br,
    Fbr,
    Fmr,
    Ld,
    St,
    Ldi,
    Ldui,
    Qwait,
    Qwaitr,
    Smis,
    Smit,
};

inline constexpr int kNumMnemonics = 20;

std::string_view mnemonic_name(Mnemonic m);
std::optional<Mnemonic> mnemonic_from_name(std::string_view name);

// 7-bit major opcode (word bits 31..25) of a single-format instruction.
// The printed tables assign SMIS's pattern to QWAIT as well; QWAIT and
// QWAITR are carried at 0010000/0010001 to keep the opcode space
// decodable (see README).
std::uint32_t major_opcode(Mnemonic m);
std::optional<Mnemonic> mnemonic_from_major_opcode(std::uint32_t opcode7);

inline constexpr int kNumQubits = 7;
inline constexpr int kNumGprs = 32;
inline constexpr int kNumTargetRegs = 32;
inline constexpr int kNumQubitPairs = 16;
inline constexpr std::uint32_t kMaxQuantumOpcode = 511; // 9-bit space

// Instruction images are capped so the BR pseudo-code's 17-bit PC
// arithmetic and sequential PC+4 never diverge.
inline constexpr std::uint32_t kMaxImageBytes = 1u << 17;

// Reporting only: one cycle is 20 ns (10000 cycles = 200 us).
inline constexpr double kNanosecondsPerCycle = 20.0;

// Renders a cycle count as microseconds, trailing zeros trimmed
// ("200 us", "200.1 us").
std::string format_cycles_us(std::uint64_t cycles);

} // namespace eqasm
