// Test-only reference implementations, independent of the library code
// they check.
//
// - bitvec: digit-vector transcription of the numeric helper pseudo-code
//   (with the >= guard ToUBitStr needs to honor its own contract).
// - packing: per-instruction word assembly from shifts and ors alone.
// - random_instruction: valid-instruction generator for round-trip runs.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "eqasm/instruction.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Bit-string transcription, digits stored LSb-first.

using BitVec = std::vector<int>;

inline std::int64_t uint_of(const BitVec &x, int n) {
    std::int64_t result = 0;
    for (int i = 0; i <= n - 1; ++i)
        if (x[static_cast<std::size_t>(i)] == 1)
            result += std::int64_t(1) << i;
    return result;
}

inline std::int64_t sint_of(const BitVec &x, int n) {
    std::int64_t result = 0;
    for (int i = 0; i <= n - 2; ++i)
        if (x[static_cast<std::size_t>(i)] == 1)
            result += std::int64_t(1) << i;
    if (x[static_cast<std::size_t>(n - 1)] == 1)
        result -= std::int64_t(1) << (n - 1);
    return result;
}

inline BitVec to_ubits(std::int64_t v, int n) {
    BitVec result(static_cast<std::size_t>(n), 0);
    if (v >= std::int64_t(1) << (n - 1)) {
        result[static_cast<std::size_t>(n - 1)] = 1;
        v -= std::int64_t(1) << (n - 1);
    }
    for (int i = 0; i <= n - 2; ++i) {
        const int bit = static_cast<int>(v % 2);
        result[static_cast<std::size_t>(i)] = bit;
        v = (v - bit) / 2;
    }
    return result;
}

inline BitVec to_sbits(std::int64_t v, int n) {
    BitVec result(static_cast<std::size_t>(n), 0);
    if (v < 0) {
        result[static_cast<std::size_t>(n - 1)] = 1;
        v += std::int64_t(1) << n;
    }
    for (int i = 0; i <= n - 2; ++i) {
        const int bit = static_cast<int>(v % 2);
        result[static_cast<std::size_t>(i)] = bit;
        v = (v - bit) / 2;
    }
    return result;
}

inline BitVec zero_ext(const BitVec &x, int n) {
    BitVec result(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < x.size(); ++i)
        result[i] = x[i];
    return result;
}

inline BitVec sign_ext(const BitVec &x, int n) {
    BitVec result(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < x.size(); ++i)
        result[i] = x[i];
    for (std::size_t i = x.size(); i < static_cast<std::size_t>(n); ++i)
        result[i] = x.back();
    return result;
}

// ---------------------------------------------------------------------------
// Word packing from the printed field layouts, shifts and ors only.

inline std::uint32_t pack_nop() { return 0u; }
inline std::uint32_t pack_stop() { return 0b0001000u << 25; }

inline std::uint32_t pack_rrr(std::uint32_t op7, unsigned rd, unsigned rs,
                              unsigned rt) {
    return (op7 << 25) | (rd << 20) | (rs << 15) | (rt << 10);
}

inline std::uint32_t pack_add(unsigned rd, unsigned rs, unsigned rt) {
    return pack_rrr(0b0011110u, rd, rs, rt);
}

inline std::uint32_t pack_not(unsigned rd, unsigned rt) {
    return (0b0011011u << 25) | (rd << 20) | (rt << 10);
}

inline std::uint32_t pack_cmp(unsigned rs, unsigned rt) {
    return (0b0001101u << 25) | (rs << 15) | (rt << 10);
}

inline std::uint32_t pack_br(int offset_words, unsigned flag) {
    const std::uint32_t imm21 =
        static_cast<std::uint32_t>(offset_words) & ((1u << 21) - 1);
    return (0b0000001u << 25) | (imm21 << 4) | flag;
}

inline std::uint32_t pack_fbr(unsigned flag, unsigned rd) {
    return (0b0010100u << 25) | (rd << 20) | flag;
}

inline std::uint32_t pack_fmr(unsigned rd, unsigned qi) {
    return (0b0010101u << 25) | (rd << 20) | qi;
}

inline std::uint32_t pack_ld(unsigned rd, unsigned rt, int imm10) {
    return (0b0001001u << 25) | (rd << 20) | (rt << 10) |
           (static_cast<std::uint32_t>(imm10) & 0x3FFu);
}

inline std::uint32_t pack_st(unsigned rs, unsigned rt, int imm10) {
    return (0b0001010u << 25) | (rs << 15) | (rt << 10) |
           (static_cast<std::uint32_t>(imm10) & 0x3FFu);
}

inline std::uint32_t pack_ldi(unsigned rd, int imm20) {
    return (0b0010110u << 25) | (rd << 20) |
           (static_cast<std::uint32_t>(imm20) & 0xFFFFFu);
}

inline std::uint32_t pack_ldui(unsigned rd, unsigned rs, unsigned imm15) {
    return (0b0010111u << 25) | (rd << 20) | (rs << 15) | imm15;
}

inline std::uint32_t pack_qwait(unsigned imm20) {
    return (0b0010000u << 25) | imm20;
}

inline std::uint32_t pack_qwaitr(unsigned rs) {
    return (0b0010001u << 25) | (rs << 15);
}

inline std::uint32_t pack_smis(unsigned sd, unsigned mask7) {
    return (0b0100000u << 25) | (sd << 19) | mask7;
}

inline std::uint32_t pack_smit(unsigned td, unsigned mask16) {
    return (0b0101000u << 25) | (td << 19) | mask16;
}

inline std::uint32_t pack_bundle_word(unsigned pi, unsigned opc0, unsigned t0,
                                      unsigned opc1, unsigned t1) {
    return (1u << 31) | (opc0 << 22) | (t0 << 17) | (opc1 << 8) | (t1 << 3) |
           pi;
}

// ---------------------------------------------------------------------------
// Random valid instructions

inline eqasm::Instruction random_instruction(std::mt19937_64 &rng) {
    using namespace eqasm;
    const auto u = [&](std::uint64_t bound) {
        return static_cast<std::uint32_t>(rng() % bound);
    };
    const auto reg = [&] { return static_cast<std::uint8_t>(u(32)); };
    const auto flag = [&] { return static_cast<CompFlag>(u(12)); };

    switch (u(17)) {
    case 0: return ins::Nop{};
    case 1: return ins::Stop{};
    case 2:
        return ins::Alu{static_cast<ins::AluOp>(u(5)), reg(), reg(), reg()};
    case 3: return ins::Not{reg(), reg()};
    case 4: return ins::Cmp{reg(), reg()};
    case 5:
        return ins::Br{flag(), static_cast<std::int32_t>(u(32768)) - 16384};
    case 6: return ins::Fbr{flag(), reg()};
    case 7: return ins::Fmr{reg(), static_cast<std::uint8_t>(u(7))};
    case 8:
        return ins::Ld{reg(), reg(), static_cast<std::int32_t>(u(1024)) - 512};
    case 9:
        return ins::St{reg(), reg(), static_cast<std::int32_t>(u(1024)) - 512};
    case 10:
        return ins::Ldi{reg(),
                        static_cast<std::int32_t>(u(1u << 20)) - (1 << 19)};
    case 11: return ins::Ldui{reg(), reg(), u(1u << 15)};
    case 12: return ins::Qwait{u(1u << 20)};
    case 13: return ins::Qwaitr{reg()};
    case 14:
        return ins::Smis{reg(), static_cast<std::uint8_t>(u(128))};
    case 15:
        return ins::Smit{reg(), static_cast<std::uint16_t>(u(65536))};
    default:
        return ins::BundleWord{
            static_cast<std::uint8_t>(u(8)),
            {static_cast<std::uint16_t>(u(512)), reg()},
            {static_cast<std::uint16_t>(u(512)), reg()}};
    }
}

} // namespace oracle
