#include "eqasm/isa.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>

namespace eqasm {

namespace {

constexpr std::array<std::string_view, kNumCompFlags> kFlagNames = {
    "always", "never", "eq", "ne", "ltu", "geu",
    "leu",    "gtu",   "lt", "ge", "le",  "gt",
};

constexpr std::array<std::string_view, kNumMnemonics> kMnemonicNames = {
    "nop", "stop", "add", "sub", "and",  "or",    "xor",  "not",  "cmp",  "br",
    "fbr", "fmr",  "ld",  "st",  "ldi",  "ldui",  "qwait", "qwaitr", "smis",
    "smit",
};

// Word bits 31..25, indexed by Mnemonic. A build can swap in its own
// table (e.g. for hardware whose QWAIT patterns differ) by pointing
// EQASM_MAJOR_OPCODE_TABLE at a header defining kMajorOpcodes.
#ifdef EQASM_MAJOR_OPCODE_TABLE
#include EQASM_MAJOR_OPCODE_TABLE
#else
constexpr std::array<std::uint32_t, kNumMnemonics> kMajorOpcodes = {
    0b0000000, // NOP
    0b0001000, // STOP
    0b0011110, // ADD
    0b0011111, // SUB
    0b0011010, // AND
    0b0011000, // OR
    0b0011001, // XOR
    0b0011011, // NOT
    0b0001101, // CMP
    0b0000001, // BR
    0b0010100, // FBR
    0b0010101, // FMR
    0b0001001, // LD
    0b0001010, // ST
    0b0010110, // LDI
    0b0010111, // LDUI
    0b0010000, // QWAIT
    0b0010001, // QWAITR
    0b0100000, // SMIS
    0b0101000, // SMIT
};
#endif

std::string lowered(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

} // namespace

std::string_view comp_flag_name(CompFlag f) {
    return kFlagNames[static_cast<std::size_t>(f)];
}

std::optional<CompFlag> comp_flag_from_name(std::string_view name) {
    const std::string low = lowered(name);
    for (std::size_t i = 0; i < kFlagNames.size(); ++i)
        if (low == kFlagNames[i])
            return static_cast<CompFlag>(i);
    return std::nullopt;
}

std::string_view mnemonic_name(Mnemonic m) {
    return kMnemonicNames[static_cast<std::size_t>(m)];
}

std::optional<Mnemonic> mnemonic_from_name(std::string_view name) {
    const std::string low = lowered(name);
    for (std::size_t i = 0; i < kMnemonicNames.size(); ++i)
        if (low == kMnemonicNames[i])
            return static_cast<Mnemonic>(i);
    return std::nullopt;
}

std::uint32_t major_opcode(Mnemonic m) {
    return kMajorOpcodes[static_cast<std::size_t>(m)];
}

std::optional<Mnemonic> mnemonic_from_major_opcode(std::uint32_t opcode7) {
    for (std::size_t i = 0; i < kMajorOpcodes.size(); ++i)
        if (kMajorOpcodes[i] == opcode7)
            return static_cast<Mnemonic>(i);
    return std::nullopt;
}

std::string format_cycles_us(std::uint64_t cycles) {
    const double us =
        static_cast<double>(cycles) * kNanosecondsPerCycle / 1000.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", us);
    std::string s(buf);
    while (!s.empty() && s.back() == '0')
        s.pop_back();
    if (!s.empty() && s.back() == '.')
        s.pop_back();
    return s + " us";
}

} // namespace eqasm
