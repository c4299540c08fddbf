#pragma once

#include <string>
#include <vector>

#include "decomp/span.hpp"

namespace decomp::lang {

enum class TokenKind {
    Ident,
    IntLit,
    FloatLit,
    StrLit,
    KwDef,
    KwReturn,
    KwIf,
    KwElif,
    KwElse,
    KwWhile,
    KwFor,
    KwIn,
    Plus,
    Minus,
    Star,
    StarStar,
    Slash,
    SlashSlash,
    Percent,
    Assign,
    EqEq,
    NotEq,
    Less,
    LessEq,
    Greater,
    GreaterEq,
    LParen,
    RParen,
    Comma,
    Colon,
    Newline,
    Indent,
    Dedent,
    EndOfFile,
};

const char* token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string text;
    SourceSpan span;
};

// Lex UTF-8 source into a token stream ending in EndOfFile.
// Indentation (spaces only, any consistent width) becomes Indent/Dedent pairs.
std::vector<Token> tokenize(const std::string& source);

}  // namespace decomp::lang
