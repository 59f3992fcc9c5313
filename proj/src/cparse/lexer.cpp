#include "magnet/cparse/lexer.hpp"

#include <cctype>
#include <unordered_set>

#include "magnet/errors.hpp"

namespace magnet::cparse {

namespace {

const std::unordered_set<std::string_view>& keywords() {
    static const std::unordered_set<std::string_view> kw = {
        "auto", "break", "case", "char", "const", "continue", "default",
        "do", "double", "else", "enum", "extern", "float", "for", "goto",
        "if", "int", "long", "register", "return", "short", "signed",
        "sizeof", "static", "struct", "switch", "typedef", "union",
        "unsigned", "void", "volatile", "while"};
    return kw;
}

// Multi-character operators, longest first so maximal munch works by
// scanning this list in order.
constexpr std::string_view kMultiOps[] = {
    "<<=", ">>=", "...",
    "==", "!=", "<=", ">=", "&&", "||", "<<", ">>",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "++", "--", "->"};

constexpr std::string_view kSingleOps = "+-*/%<>=!&|^~?.";
constexpr std::string_view kPunct = "(){}[];,:";

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> out;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    const std::size_t n = source.size();

    auto advance = [&](std::size_t count) {
        for (std::size_t k = 0; k < count; ++k) {
            if (source[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
            ++i;
        }
    };
    auto push = [&](TokenKind kind, std::size_t len) {
        Token t;
        t.kind = kind;
        t.text = std::string(source.substr(i, len));
        t.index = static_cast<int>(out.size());
        t.line = line;
        t.column = column;
        out.push_back(std::move(t));
        advance(len);
    };

    while (i < n) {
        const char c = source[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
            c == '\f') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && source[i + 1] == '/') {
            while (i < n && source[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && source[i + 1] == '*') {
            const int start_line = line, start_col = column;
            advance(2);
            bool closed = false;
            while (i + 1 < n) {
                if (source[i] == '*' && source[i + 1] == '/') {
                    advance(2);
                    closed = true;
                    break;
                }
                advance(1);
            }
            if (!closed)
                throw LexError("unterminated comment", start_line, start_col);
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t len = 1;
            while (i + len < n && is_ident_char(source[i + len])) ++len;
            const std::string_view word = source.substr(i, len);
            push(keywords().count(word) ? TokenKind::Keyword
                                        : TokenKind::Identifier,
                 len);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n &&
             std::isdigit(static_cast<unsigned char>(source[i + 1])))) {
            // Integer or floating literal, including hex and suffixes.
            std::size_t len = 0;
            bool hex = false;
            if (c == '0' && i + 1 < n &&
                (source[i + 1] == 'x' || source[i + 1] == 'X')) {
                hex = true;
                len = 2;
            }
            auto digit_ok = [&](char d) {
                if (hex) return std::isxdigit(static_cast<unsigned char>(d)) != 0;
                return std::isdigit(static_cast<unsigned char>(d)) != 0;
            };
            while (i + len < n && digit_ok(source[i + len])) ++len;
            if (!hex && i + len < n && source[i + len] == '.') {
                ++len;
                while (i + len < n &&
                       std::isdigit(static_cast<unsigned char>(source[i + len])))
                    ++len;
            }
            if (!hex && i + len < n &&
                (source[i + len] == 'e' || source[i + len] == 'E')) {
                std::size_t e = len + 1;
                if (i + e < n && (source[i + e] == '+' || source[i + e] == '-'))
                    ++e;
                if (i + e < n &&
                    std::isdigit(static_cast<unsigned char>(source[i + e]))) {
                    len = e;
                    while (i + len < n &&
                           std::isdigit(
                               static_cast<unsigned char>(source[i + len])))
                        ++len;
                }
            }
            while (i + len < n &&
                   (source[i + len] == 'u' || source[i + len] == 'U' ||
                    source[i + len] == 'l' || source[i + len] == 'L' ||
                    source[i + len] == 'f' || source[i + len] == 'F'))
                ++len;
            push(TokenKind::Literal, len);
            continue;
        }
        if (c == '"' || c == '\'') {
            const char quote = c;
            const int start_line = line, start_col = column;
            std::size_t len = 1;
            bool closed = false;
            while (i + len < n) {
                if (source[i + len] == '\\' && i + len + 1 < n) {
                    len += 2;
                    continue;
                }
                if (source[i + len] == quote) {
                    ++len;
                    closed = true;
                    break;
                }
                if (source[i + len] == '\n') break;
                ++len;
            }
            if (!closed)
                throw LexError(quote == '"' ? "unterminated string literal"
                                            : "unterminated character literal",
                               start_line, start_col);
            push(TokenKind::Literal, len);
            continue;
        }
        bool matched = false;
        for (std::string_view op : kMultiOps) {
            if (source.substr(i, op.size()) == op) {
                push(TokenKind::Operator, op.size());
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (kSingleOps.find(c) != std::string_view::npos) {
            push(TokenKind::Operator, 1);
            continue;
        }
        if (kPunct.find(c) != std::string_view::npos) {
            push(TokenKind::Punctuation, 1);
            continue;
        }
        throw LexError(std::string("unrecognized character '") + c + "'", line,
                       column);
    }

    if (out.empty()) throw LexError("no function present", 1, 1);
    return out;
}

std::string join_tokens(const std::vector<Token>& tokens, int first, int last) {
    std::string s;
    for (int k = first; k <= last; ++k) {
        if (k != first) s += ' ';
        s += tokens[static_cast<std::size_t>(k)].text;
    }
    return s;
}

}  // namespace magnet::cparse
