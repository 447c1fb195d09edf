#include "bs/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "bs/error.hpp"

namespace bs {

namespace {

constexpr std::array<std::string_view, 21> kKeywords = {
    "and", "break", "do",  "else", "elseif", "end",    "false", "for",  "function", "if",   "in",
    "local", "nil", "not", "or",   "repeat", "return", "then",  "true", "until",    "while",
};

// Longest first so that `..` wins over `.` and `==` over `=`.
constexpr std::array<std::string_view, 13> kOperators = {
    "..", "==", "~=", "<=", ">=", "+", "-", "*", "/", "%", "<", ">", "=",
};

constexpr std::string_view kPunctuation = "(){}[],;.:";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            if (pos_ >= src_.size())
                break;
            out.push_back(next());
        }
        return out;
    }

private:
    char peek(size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
            } else if (c == '-' && peek(1) == '-') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }

    Token make(TokenKind kind, size_t start) const {
        return Token{kind, std::string(src_.substr(start, pos_ - start)), line_};
    }

    Token next() {
        size_t start = pos_;
        char c = src_[pos_];
        if (ident_start(c)) {
            while (ident_char(peek()))
                ++pos_;
            Token t = make(TokenKind::Identifier, start);
            if (is_keyword(t.lexeme))
                t.kind = TokenKind::Keyword;
            return t;
        }
        if (digit(c) || (c == '.' && digit(peek(1))))
            return number(start);
        if (c == '"' || c == '\'')
            return string(start);
        for (std::string_view op : kOperators) {
            if (src_.substr(pos_, op.size()) == op) {
                pos_ += op.size();
                return make(TokenKind::Operator, start);
            }
        }
        if (kPunctuation.find(c) != std::string_view::npos) {
            ++pos_;
            return make(TokenKind::Punctuation, start);
        }
        throw Error(ErrorKind::LexError, "unexpected character '" + std::string(1, c) + "'", line_);
    }

    Token number(size_t start) {
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            pos_ += 2;
            if (!std::isxdigit(static_cast<unsigned char>(peek())))
                throw Error(ErrorKind::LexError, "malformed number", line_);
            while (std::isxdigit(static_cast<unsigned char>(peek())))
                ++pos_;
        } else {
            while (digit(peek()))
                ++pos_;
            if (peek() == '.' && peek(1) != '.') {
                ++pos_;
                while (digit(peek()))
                    ++pos_;
            }
            if (peek() == 'e' || peek() == 'E') {
                ++pos_;
                if (peek() == '+' || peek() == '-')
                    ++pos_;
                if (!digit(peek()))
                    throw Error(ErrorKind::LexError, "malformed number", line_);
                while (digit(peek()))
                    ++pos_;
            }
        }
        if (ident_char(peek()))
            throw Error(ErrorKind::LexError, "malformed number", line_);
        return make(TokenKind::Number, start);
    }

    Token string(size_t start) {
        char quote = src_[pos_++];
        int first_line = line_;
        while (true) {
            if (pos_ >= src_.size() || src_[pos_] == '\n')
                throw Error(ErrorKind::LexError, "unterminated string", first_line);
            char c = src_[pos_++];
            if (c == quote)
                break;
            if (c == '\\') {
                char e = peek();
                if (std::string_view("ntr\\\"'0").find(e) == std::string_view::npos || e == '\0')
                    throw Error(ErrorKind::LexError, "invalid escape sequence", line_);
                ++pos_;
            }
        }
        Token t = make(TokenKind::String, start);
        t.line = first_line;
        return t;
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
    switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
    }
    return "token";
}

bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::string unquote(std::string_view lexeme) {
    std::string out;
    out.reserve(lexeme.size());
    for (size_t i = 1; i + 1 < lexeme.size(); ++i) {
        char c = lexeme[i];
        if (c != '\\') {
            out.push_back(c);
            continue;
        }
        char e = lexeme[++i];
        switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '0': out.push_back('\0'); break;
        default: out.push_back(e); break;
        }
    }
    return out;
}

}  // namespace bs
