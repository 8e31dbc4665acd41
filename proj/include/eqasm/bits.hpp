#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "eqasm/error.hpp"

namespace eqasm {

/// Fixed-width bit vector, 1..64 bits, "LSb 0" numbering (bit 0 is the
/// rightmost when printed). All instruction-word arithmetic in this
/// library is expressed through these values; there is no implicit
/// truncation; every narrowing is an explicit slice().
class BitString {
public:
    // Width w, all bits zero.
    static BitString zeros(int w) { return BitString(w, 0); }

    // From the low w bits of a raw pattern. Bits above w must be zero.
    static BitString of(std::uint64_t pattern, int w);

    // Text of '0'/'1' characters, MSb first (e.g. "00000101").
    static BitString from_text(std::string_view text);

    // N-bit binary representation of an unsigned value (ToUBitStr).
    static BitString from_uint(std::uint64_t v, int w);

    // N-bit two's complement of a signed value (ToSBitStr).
    static BitString from_sint(std::int64_t v, int w);

    int width() const { return width_; }

    // Bit i under LSb-0 numbering.
    bool bit(int i) const;

    BitString with_bit(int i, bool v) const;

    // b[h:l], width h-l+1.
    BitString slice(int h, int l) const;

    // Unsigned value of the least significant n bits (UInt).
    std::uint64_t uint_value(int n) const;
    std::uint64_t uint_value() const { return uint_value(width_); }

    // Two's-complement value of the least significant n bits (SInt).
    std::int64_t sint_value(int n) const;
    std::int64_t sint_value() const { return sint_value(width_); }

    // Widen to n bits with zero / sign fill (ZeroExt / SignExt).
    BitString zero_extend(int n) const;
    BitString sign_extend(int n) const;

    std::string to_string() const;

    bool operator==(const BitString &) const = default;

private:
    BitString(int w, std::uint64_t bits) : width_(w), bits_(bits) {}

    int width_;
    std::uint64_t bits_; // low width_ bits valid, rest zero

    friend BitString concat(const BitString &hi, const BitString &lo);
};

// hi :: lo, hi in the most significant bits. Combined width must stay
// within the 64-bit cap.
BitString concat(const BitString &hi, const BitString &lo);

} // namespace eqasm
