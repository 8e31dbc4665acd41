#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include "eqasm/config.hpp"
#include "eqasm/isa.hpp"

namespace eqasm {

// SplitMix64 (Steele/Lea/Flood); the documented, seedable generator
// behind all measurement sampling. Identical seeds give identical
// streams.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1), 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Independent derived stream.
    SplitMix64 split() { return SplitMix64(next()); }

private:
    std::uint64_t state_;
};

// Pure state vector over the seven physical qubits. Basis index bit i is
// the state of qubit i.
class QuantumDevice {
public:
    static constexpr int kDim = 1 << kNumQubits;

    QuantumDevice(); // |0...0>

    void apply_single(int qubit, const Mat2 &u);

    // q_hi is the operation's source qubit (first tensor factor of the
    // 4x4 matrix), q_lo the target.
    void apply_two(int q_hi, int q_lo, const Mat4 &u);

    // Born-rule sample, then projection and renormalization. Consumes
    // one draw from the generator.
    int measure(int qubit, SplitMix64 &rng);

    // Reset to |0>: measure, then flip if the outcome was 1.
    void reset(int qubit, SplitMix64 &rng);

    double prob_one(int qubit) const;
    double norm() const;

    const std::array<std::complex<double>, kDim> &amplitudes() const {
        return amp_;
    }

private:
    std::array<std::complex<double>, kDim> amp_;
};

} // namespace eqasm
