#include <cctype>

#include "eqasm/frontend.hpp"
#include "eqasm/isa.hpp"

namespace eqasm {

char reg_kind_letter(RegKind k) {
    switch (k) {
    case RegKind::R: return 'r';
    case RegKind::S: return 's';
    case RegKind::T: return 't';
    case RegKind::Q: return 'q';
    }
    return '?';
}

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

int reg_limit(RegKind k) {
    return k == RegKind::Q ? kNumQubits : kNumGprs;
}

struct Lexer {
    std::string_view src;
    std::string filename;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;
    std::vector<Token> out;

    SourceLoc here() const { return {filename, line, col}; }

    char peek(std::size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }

    void advance() {
        if (pos < src.size()) {
            ++pos;
            ++col;
        }
    }

    void push(TokenKind kind, std::string text, SourceLoc loc) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.loc = std::move(loc);
        out.push_back(std::move(t));
    }

    void lex_newline() {
        // Collapse CR+LF; bare LF or CR also accepted.
        push(TokenKind::Eol, "\n", here());
        if (peek() == '\r' && peek(1) == '\n')
            advance();
        advance();
        ++line;
        col = 1;
    }

    void lex_number() {
        const SourceLoc loc = here();
        std::string text;
        int radix = 10;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X'))
            radix = 16;
        else if (peek() == '0' && (peek(1) == 'b' || peek(1) == 'B'))
            radix = 2;
        if (radix != 10) {
            text += peek();
            advance();
            text += peek();
            advance();
        }
        std::uint64_t value = 0;
        bool any = false;
        while (true) {
            const char c = peek();
            int digit = -1;
            if (c >= '0' && c <= '9')
                digit = c - '0';
            else if (radix == 16 && c >= 'a' && c <= 'f')
                digit = c - 'a' + 10;
            else if (radix == 16 && c >= 'A' && c <= 'F')
                digit = c - 'A' + 10;
            if (digit < 0 || digit >= radix)
                break;
            if (value > (~0ull - static_cast<std::uint64_t>(digit)) /
                            static_cast<std::uint64_t>(radix))
                throw ParseError(loc, "integer literal too large");
            value = value * static_cast<std::uint64_t>(radix) +
                    static_cast<std::uint64_t>(digit);
            text += c;
            any = true;
            advance();
        }
        if (!any)
            throw ParseError(loc, "malformed integer literal '" + text + "'");
        if (ident_char(peek()))
            throw ParseError(here(), "unexpected character '" +
                                         std::string(1, peek()) +
                                         "' in integer literal");
        Token t;
        t.kind = TokenKind::Integer;
        t.text = std::move(text);
        t.loc = loc;
        t.value = value;
        t.radix = radix;
        out.push_back(std::move(t));
    }

    void lex_word() {
        const SourceLoc loc = here();
        std::string text;
        while (ident_char(peek())) {
            text += peek();
            advance();
        }

        // q#<n>: quantum-opcode literal (the one place '#' does not open
        // a comment).
        if ((text == "q" || text == "Q") && peek() == '#' &&
            std::isdigit(static_cast<unsigned char>(peek(1)))) {
            advance(); // '#'
            std::uint64_t value = 0;
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                value = value * 10 + static_cast<std::uint64_t>(peek() - '0');
                if (value > kMaxQuantumOpcode)
                    throw ParseError(loc, "quantum opcode literal exceeds 511");
                digits += peek();
                advance();
            }
            Token t;
            t.kind = TokenKind::OpcodeLiteral;
            t.text = text + "#" + digits;
            t.loc = loc;
            t.value = value;
            out.push_back(std::move(t));
            return;
        }

        // Register names: one of r/s/t/q followed only by digits.
        const char head = static_cast<char>(
            std::tolower(static_cast<unsigned char>(text[0])));
        if (text.size() > 1 &&
            (head == 'r' || head == 's' || head == 't' || head == 'q')) {
            bool all_digits = true;
            for (std::size_t i = 1; i < text.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(text[i])))
                    all_digits = false;
            if (all_digits) {
                const RegKind kind = head == 'r'   ? RegKind::R
                                     : head == 's' ? RegKind::S
                                     : head == 't' ? RegKind::T
                                                   : RegKind::Q;
                if (text.size() > 3)
                    throw ParseError(loc, "register index out of range in '" +
                                              text + "'");
                const int index = std::stoi(text.substr(1));
                if (index >= reg_limit(kind))
                    throw ParseError(loc, "register index out of range in '" +
                                              text + "'");
                Token t;
                t.kind = TokenKind::Register;
                t.text = std::move(text);
                t.loc = loc;
                t.reg_kind = kind;
                t.reg_index = index;
                out.push_back(std::move(t));
                return;
            }
        }

        push(TokenKind::Identifier, std::move(text), loc);
    }

    void lex_directive() {
        const SourceLoc loc = here();
        std::string text = ".";
        advance();
        if (!ident_start(peek()))
            throw ParseError(loc, "expected a directive name after '.'");
        while (ident_char(peek())) {
            text += peek();
            advance();
        }
        push(TokenKind::Directive, std::move(text), loc);
    }

    std::vector<Token> run() {
        while (pos < src.size()) {
            const char c = peek();
            if (c == '\n' || c == '\r') {
                lex_newline();
            } else if (c == ' ' || c == '\t') {
                advance();
            } else if (c == '#') {
                while (pos < src.size() && peek() != '\n' && peek() != '\r')
                    advance();
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number();
            } else if (ident_start(c)) {
                lex_word();
            } else if (c == '.') {
                lex_directive();
            } else {
                const SourceLoc loc = here();
                TokenKind kind;
                switch (c) {
                case ',': kind = TokenKind::Comma; break;
                case ':': kind = TokenKind::Colon; break;
                case '|': kind = TokenKind::Pipe; break;
                case '{': kind = TokenKind::LBrace; break;
                case '}': kind = TokenKind::RBrace; break;
                case '(': kind = TokenKind::LParen; break;
                case ')': kind = TokenKind::RParen; break;
                case '-': kind = TokenKind::Minus; break;
                default:
                    throw ParseError(loc, "illegal character '" +
                                              std::string(1, c) + "'");
                }
                push(kind, std::string(1, c), loc);
                advance();
            }
        }
        push(TokenKind::Eol, "\n", here());
        push(TokenKind::Eof, "", here());
        return std::move(out);
    }
};

} // namespace

std::vector<Token> tokenize(std::string_view source,
                            const std::string &filename) {
    Lexer lexer{source, filename, 0, 1, 1, {}};
    return lexer.run();
}

} // namespace eqasm
