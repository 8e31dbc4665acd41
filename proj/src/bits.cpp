#include "eqasm/bits.hpp"

namespace eqasm {

namespace {

void check_width(int w) {
    if (w < 1 || w > 64)
        throw ValueError("bit-string width must be in 1..64, got " +
                         std::to_string(w));
}

std::uint64_t low_mask(int w) {
    return w >= 64 ? ~0ull : (1ull << w) - 1;
}

} // namespace

BitString BitString::of(std::uint64_t pattern, int w) {
    check_width(w);
    if ((pattern & ~low_mask(w)) != 0)
        throw ValueError("pattern does not fit in " + std::to_string(w) +
                         " bits");
    return BitString(w, pattern);
}

BitString BitString::from_text(std::string_view text) {
    check_width(static_cast<int>(text.size()));
    std::uint64_t bits = 0;
    for (char c : text) {
        if (c != '0' && c != '1')
            throw ValueError("bit-string text may contain only '0' and '1'");
        bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return BitString(static_cast<int>(text.size()), bits);
}

BitString BitString::from_uint(std::uint64_t v, int w) {
    check_width(w);
    if (w < 64 && v > low_mask(w))
        throw ValueError("unsigned value " + std::to_string(v) +
                         " does not fit in " + std::to_string(w) + " bits");
    return BitString(w, v);
}

BitString BitString::from_sint(std::int64_t v, int w) {
    check_width(w);
    if (w < 64) {
        const std::int64_t lo = -(std::int64_t(1) << (w - 1));
        const std::int64_t hi = (std::int64_t(1) << (w - 1)) - 1;
        if (v < lo || v > hi)
            throw ValueError("signed value " + std::to_string(v) +
                             " does not fit in " + std::to_string(w) + " bits");
    }
    return BitString(w, static_cast<std::uint64_t>(v) & low_mask(w));
}

bool BitString::bit(int i) const {
    if (i < 0 || i >= width_)
        throw ValueError("bit index " + std::to_string(i) +
                         " out of range for width " + std::to_string(width_));
    return (bits_ >> i) & 1;
}

BitString BitString::with_bit(int i, bool v) const {
    if (i < 0 || i >= width_)
        throw ValueError("bit index " + std::to_string(i) +
                         " out of range for width " + std::to_string(width_));
    std::uint64_t bits = v ? (bits_ | (1ull << i)) : (bits_ & ~(1ull << i));
    return BitString(width_, bits);
}

BitString BitString::slice(int h, int l) const {
    if (l < 0 || h < l || h >= width_)
        throw ValueError("bad slice [" + std::to_string(h) + ":" +
                         std::to_string(l) + "] of width " +
                         std::to_string(width_));
    const int w = h - l + 1;
    return BitString(w, (bits_ >> l) & low_mask(w));
}

std::uint64_t BitString::uint_value(int n) const {
    if (n < 0 || n > width_)
        throw ValueError("UInt width " + std::to_string(n) +
                         " exceeds bit-string width " + std::to_string(width_));
    return n == 0 ? 0 : bits_ & low_mask(n);
}

std::int64_t BitString::sint_value(int n) const {
    if (n < 1 || n > width_)
        throw ValueError("SInt width " + std::to_string(n) +
                         " exceeds bit-string width " + std::to_string(width_));
    std::uint64_t v = bits_ & low_mask(n);
    // Two's complement: subtract 2^n in unsigned arithmetic, the cast
    // keeps the bit pattern.
    if (n < 64 && (v >> (n - 1)))
        v -= std::uint64_t(1) << n;
    return static_cast<std::int64_t>(v);
}

BitString BitString::zero_extend(int n) const {
    check_width(n);
    if (n < width_)
        throw ValueError("cannot zero-extend width " + std::to_string(width_) +
                         " down to " + std::to_string(n));
    return BitString(n, bits_);
}

BitString BitString::sign_extend(int n) const {
    check_width(n);
    if (n < width_)
        throw ValueError("cannot sign-extend width " + std::to_string(width_) +
                         " down to " + std::to_string(n));
    std::uint64_t bits = bits_;
    if (bit(width_ - 1))
        bits |= low_mask(n) & ~low_mask(width_);
    return BitString(n, bits);
}

std::string BitString::to_string() const {
    std::string s(static_cast<std::size_t>(width_), '0');
    for (int i = 0; i < width_; ++i)
        if ((bits_ >> i) & 1)
            s[static_cast<std::size_t>(width_ - 1 - i)] = '1';
    return s;
}

BitString concat(const BitString &hi, const BitString &lo) {
    if (hi.width_ + lo.width_ > 64)
        throw ValueError("concatenation exceeds the 64-bit width cap");
    return BitString(hi.width_ + lo.width_,
                     (hi.bits_ << lo.width_) | lo.bits_);
}

} // namespace eqasm
