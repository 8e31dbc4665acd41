#include "eqasm/error.hpp"

#include <sstream>

namespace eqasm {

std::string SourceLoc::str() const {
    std::ostringstream os;
    os << (file.empty() ? "<input>" : file);
    if (line > 0) {
        os << ':' << line;
        if (col > 0)
            os << ':' << col;
    }
    return os.str();
}

static std::string with_loc(const SourceLoc &loc, const std::string &msg) {
    return loc.str() + ": " + msg;
}

ParseError::ParseError(SourceLoc loc, const std::string &msg)
    : Error(with_loc(loc, msg)), loc_(std::move(loc)) {}

ConfigError::ConfigError(SourceLoc loc, const std::string &msg)
    : Error(with_loc(loc, msg)), loc_(std::move(loc)) {}

DecodeError::DecodeError(const std::string &msg, long word_index)
    : Error(word_index >= 0 ? "word " + std::to_string(word_index) + ": " + msg
                            : msg),
      word_index_(word_index) {}

RuntimeError::RuntimeError(const std::string &msg, std::int64_t pc)
    : Error(pc >= 0 ? msg + " (pc=0x" +
                          [](std::uint64_t v) {
                              char buf[16];
                              std::snprintf(buf, sizeof buf, "%08llx",
                                            static_cast<unsigned long long>(v));
                              return std::string(buf);
                          }(static_cast<std::uint64_t>(pc)) +
                          ")"
                    : msg),
      pc_(pc) {}

std::string Diagnostic::str() const {
    const char *sev = severity == Severity::Note      ? "note"
                      : severity == Severity::Warning ? "warning"
                                                      : "error";
    return loc.str() + ": " + sev + ": " + message;
}

std::string render_diagnostics(const std::vector<Diagnostic> &diags) {
    std::string out;
    for (const auto &d : diags) {
        out += d.str();
        out += '\n';
    }
    return out;
}

} // namespace eqasm
