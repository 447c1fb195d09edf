#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bs {

enum class TokenKind { Identifier, Number, String, Keyword, Operator, Punctuation };

struct Token {
    TokenKind kind;
    std::string lexeme;  // raw source text; string literals keep their quotes
    int line;

    bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
    friend bool operator==(const Token&, const Token&) = default;
};

std::string_view token_kind_name(TokenKind kind);

// Splits source into tokens. `--` comments run to end of line and are dropped.
// Throws Error(LexError) on unterminated strings, bad escapes and stray characters.
std::vector<Token> tokenize(std::string_view source);

// Decodes the escapes of a string-literal lexeme produced by tokenize().
std::string unquote(std::string_view lexeme);

bool is_keyword(std::string_view word);

}  // namespace bs
