#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqasm {

// Position in an assembly or configuration file. line/col are 1-based;
// 0 means "not applicable".
struct SourceLoc {
    std::string file;
    int line = 0;
    int col = 0;

    std::string str() const;
};

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Domain/range violation in a value-level operation (bit strings, masks).
class ValueError : public Error {
public:
    using Error::Error;
};

// Lex/parse/resolve failure; carries the offending location.
class ParseError : public Error {
public:
    ParseError(SourceLoc loc, const std::string &msg);
    const SourceLoc &loc() const { return loc_; }

private:
    SourceLoc loc_;
};

// Malformed configuration file (qmap, gate semantics, topology).
class ConfigError : public Error {
public:
    ConfigError(SourceLoc loc, const std::string &msg);
    const SourceLoc &loc() const { return loc_; }

private:
    SourceLoc loc_;
};

// A field does not fit its encoding, or the image is oversized.
class EncodeError : public Error {
public:
    using Error::Error;
};

// A 32-bit word is not a valid instruction. word_index is the word
// offset within the image when known, -1 otherwise.
class DecodeError : public Error {
public:
    explicit DecodeError(const std::string &msg, long word_index = -1);
    long word_index() const { return word_index_; }

private:
    long word_index_;
};

// Execution failure; pc of the offending instruction when known.
class RuntimeError : public Error {
public:
    explicit RuntimeError(const std::string &msg, std::int64_t pc = -1);
    std::int64_t pc() const { return pc_; }

private:
    std::int64_t pc_;
};

enum class Severity { Note, Warning, Error };

// A non-fatal finding (linter output, assembler warnings).
struct Diagnostic {
    Severity severity = Severity::Warning;
    SourceLoc loc;
    std::string message;

    std::string str() const;
};

std::string render_diagnostics(const std::vector<Diagnostic> &diags);

} // namespace eqasm
