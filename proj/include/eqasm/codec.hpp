#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eqasm/config.hpp"
#include "eqasm/instruction.hpp"

namespace eqasm {

// Packs an instruction into its 32-bit word. Field ranges are validated;
// violations throw EncodeError (the frontend prevents them upstream).
std::uint32_t encode(const Instruction &instr);

// Permissive decoding ignores nonzero reserved bits (and a
// non-sign-extended imm21 top); Strict rejects them.
enum class DecodeMode { Permissive, Strict };

// Inverse of encode on the valid set. word_index only flavors error
// messages.
Instruction decode(std::uint32_t word, DecodeMode mode = DecodeMode::Permissive,
                   long word_index = -1);

// SMIS: bit i selects qubit i. The set must be nonempty, members < 7.
std::uint8_t compute_smis_mask(std::span<const int> qubits);

// SMIT: bit pair_index(p) per selected pair; pairs must be in the
// topology.
std::uint16_t compute_smit_mask(std::span<const QubitPair> pairs,
                                const Topology &topo);

// Splits a bundle into words: two ops per word, odd count padded with
// qnop, continuation words carry pi=0.
std::vector<ins::BundleWord> pack_bundle(int pi,
                                         std::span<const ins::BundleOp> ops);

// Converts a BR target byte delta to the signed word offset stored in
// imm21[14:0]. Rejects non-multiples of 4 and offsets beyond the 15-bit
// range the hardware consumes.
std::int32_t encode_branch_offset(std::int64_t byte_delta);

// Flat binary image: 32-bit words, little-endian within each word unless
// big_endian is set, no header.
std::vector<std::uint8_t> image_to_bytes(std::span<const std::uint32_t> words,
                                         bool big_endian = false);
std::vector<std::uint32_t> image_from_bytes(std::span<const std::uint8_t> bytes,
                                            bool big_endian = false);

} // namespace eqasm
