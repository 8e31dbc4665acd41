#include "eqasm/quantum.hpp"

#include <cmath>

#include "eqasm/error.hpp"

namespace eqasm {

QuantumDevice::QuantumDevice() : amp_{} {
    amp_[0] = 1.0;
}

void QuantumDevice::apply_single(int qubit, const Mat2 &u) {
    const int bit = 1 << qubit;
    for (int n = 0; n < kDim; ++n) {
        if (n & bit)
            continue;
        const auto a0 = amp_[n];
        const auto a1 = amp_[n | bit];
        amp_[n] = u[0] * a0 + u[1] * a1;
        amp_[n | bit] = u[2] * a0 + u[3] * a1;
    }
}

void QuantumDevice::apply_two(int q_hi, int q_lo, const Mat4 &u) {
    const int hi = 1 << q_hi;
    const int lo = 1 << q_lo;
    for (int n = 0; n < kDim; ++n) {
        if (n & (hi | lo))
            continue;
        // Local basis order |q_hi q_lo> = |00>, |01>, |10>, |11>.
        const std::array<int, 4> idx = {n, n | lo, n | hi, n | hi | lo};
        std::array<std::complex<double>, 4> in;
        for (int k = 0; k < 4; ++k)
            in[static_cast<std::size_t>(k)] = amp_[idx[static_cast<std::size_t>(k)]];
        for (int r = 0; r < 4; ++r) {
            std::complex<double> acc = 0;
            for (int c = 0; c < 4; ++c)
                acc += u[static_cast<std::size_t>(4 * r + c)] *
                       in[static_cast<std::size_t>(c)];
            amp_[idx[static_cast<std::size_t>(r)]] = acc;
        }
    }
}

double QuantumDevice::prob_one(int qubit) const {
    const int bit = 1 << qubit;
    double p = 0;
    for (int n = 0; n < kDim; ++n)
        if (n & bit)
            p += std::norm(amp_[n]);
    return p;
}

int QuantumDevice::measure(int qubit, SplitMix64 &rng) {
    const double p1 = prob_one(qubit);
    const int result = rng.next_double() < p1 ? 1 : 0;
    const double p = result ? p1 : 1.0 - p1;
    if (p <= 0)
        throw RuntimeError("measurement projected onto a zero-probability "
                           "branch");
    const double scale = 1.0 / std::sqrt(p);
    const int bit = 1 << qubit;
    for (int n = 0; n < kDim; ++n) {
        if (((n & bit) != 0) == (result != 0))
            amp_[n] *= scale;
        else
            amp_[n] = 0;
    }
    return result;
}

void QuantumDevice::reset(int qubit, SplitMix64 &rng) {
    if (measure(qubit, rng) == 1)
        apply_single(qubit, Mat2{0, 1, 1, 0});
}

double QuantumDevice::norm() const {
    double n2 = 0;
    for (const auto &a : amp_)
        n2 += std::norm(a);
    return std::sqrt(n2);
}

} // namespace eqasm
