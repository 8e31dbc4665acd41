#pragma once

#include <span>
#include <string>

#include "eqasm/codec.hpp"
#include "eqasm/config.hpp"
#include "eqasm/instruction.hpp"

namespace eqasm {

// Canonical assembly text of one instruction. Quantum opcodes are named
// through the map when one is given, falling back to q#<n>.
std::string render_instruction(const Instruction &instr,
                               const OpcodeMap *names = nullptr);

// Re-assemblable text for a whole image: one statement per line; words
// whose decoding would not reproduce the exact bits become .word
// escapes. Strict mode throws DecodeError instead of escaping.
std::string disassemble(std::span<const std::uint32_t> words,
                        const OpcodeMap &names,
                        DecodeMode mode = DecodeMode::Permissive);

} // namespace eqasm
