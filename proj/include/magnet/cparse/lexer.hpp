#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace magnet::cparse {

enum class TokenKind { Identifier, Keyword, Literal, Operator, Punctuation };

struct Token {
    TokenKind kind = TokenKind::Identifier;
    std::string text;
    int index = 0;  // 0-based position in the token stream
    int line = 1;   // 1-based source position of the first character
    int column = 1;
};

/// Tokenizes a single C function in the supported subset. Comments are
/// stripped. Throws LexError on unrecognized bytes, unterminated
/// comments/literals, or when the input contains no tokens at all.
std::vector<Token> tokenize(std::string_view source);

/// Joins token texts [first..last] with single spaces (node value strings).
std::string join_tokens(const std::vector<Token>& tokens, int first, int last);

}  // namespace magnet::cparse
