#include "decomp/token.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

namespace decomp::lang {

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Ident: return "identifier";
        case TokenKind::IntLit: return "integer";
        case TokenKind::FloatLit: return "float";
        case TokenKind::StrLit: return "string";
        case TokenKind::KwDef: return "'def'";
        case TokenKind::KwReturn: return "'return'";
        case TokenKind::KwIf: return "'if'";
        case TokenKind::KwElif: return "'elif'";
        case TokenKind::KwElse: return "'else'";
        case TokenKind::KwWhile: return "'while'";
        case TokenKind::KwFor: return "'for'";
        case TokenKind::KwIn: return "'in'";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::StarStar: return "'**'";
        case TokenKind::Slash: return "'/'";
        case TokenKind::SlashSlash: return "'//'";
        case TokenKind::Percent: return "'%'";
        case TokenKind::Assign: return "'='";
        case TokenKind::EqEq: return "'=='";
        case TokenKind::NotEq: return "'!='";
        case TokenKind::Less: return "'<'";
        case TokenKind::LessEq: return "'<='";
        case TokenKind::Greater: return "'>'";
        case TokenKind::GreaterEq: return "'>='";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::Comma: return "','";
        case TokenKind::Colon: return "':'";
        case TokenKind::Newline: return "newline";
        case TokenKind::Indent: return "indent";
        case TokenKind::Dedent: return "dedent";
        case TokenKind::EndOfFile: return "end of file";
    }
    return "?";
}

namespace {

const std::unordered_map<std::string, TokenKind>& keywords() {
    static const std::unordered_map<std::string, TokenKind> kw = {
        {"def", TokenKind::KwDef},   {"return", TokenKind::KwReturn}, {"if", TokenKind::KwIf},
        {"elif", TokenKind::KwElif}, {"else", TokenKind::KwElse},     {"while", TokenKind::KwWhile},
        {"for", TokenKind::KwFor},   {"in", TokenKind::KwIn},
    };
    return kw;
}

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1;
    int col = 1;
    std::vector<Token> out;
    std::vector<int> indent_stack{0};

    explicit Lexer(const std::string& s) : src(s) {}

    bool at_end() const { return pos >= src.size(); }
    char peek(size_t ahead = 0) const { return pos + ahead < src.size() ? src[pos + ahead] : '\0'; }

    char advance() {
        char c = src[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    SourceSpan here(int length = 1) const { return SourceSpan{line, col, length}; }

    void push(TokenKind kind, std::string text, SourceSpan span) {
        out.push_back(Token{kind, std::move(text), span});
    }

    // Measures leading spaces of the current line; returns false if the line
    // is blank or comment-only (consumed, no tokens emitted).
    bool handle_line_start() {
        int width = 0;
        SourceSpan start = here();
        while (!at_end() && (peek() == ' ' || peek() == '\t')) {
            if (peek() == '\t') {
                throw LexError(here(), "tab character in indentation (use spaces)");
            }
            advance();
            ++width;
        }
        if (at_end()) return false;
        if (peek() == '\r' && peek(1) == '\n') {
            advance();
            advance();
            return false;
        }
        if (peek() == '\n') {
            advance();
            return false;
        }
        if (peek() == '#') {
            skip_comment();
            return false;
        }
        if (width > indent_stack.back()) {
            indent_stack.push_back(width);
            push(TokenKind::Indent, "", SourceSpan{start.line, 1, width});
        } else {
            while (width < indent_stack.back()) {
                indent_stack.pop_back();
                push(TokenKind::Dedent, "", SourceSpan{start.line, 1, width});
            }
            if (width != indent_stack.back()) {
                throw LexError(SourceSpan{start.line, 1, width}, "inconsistent indentation");
            }
        }
        return true;
    }

    void skip_comment() {
        while (!at_end() && peek() != '\n') advance();
        if (!at_end()) advance();
    }

    void lex_string() {
        SourceSpan span = here();
        char quote = advance();
        std::string value;
        while (true) {
            if (at_end() || peek() == '\n') {
                throw LexError(span, "unterminated string literal");
            }
            char c = advance();
            if (c == quote) break;
            if (c == '\\') {
                if (at_end() || peek() == '\n') throw LexError(span, "unterminated string literal");
                char esc = advance();
                switch (esc) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case '\\': value += '\\'; break;
                    case '\'': value += '\''; break;
                    case '"': value += '"'; break;
                    default:
                        throw LexError(SourceSpan{line, std::max(1, col - 2), 2},
                                       "unknown escape in string literal");
                }
            } else {
                value += c;
            }
        }
        span.length = col - span.column;
        push(TokenKind::StrLit, value, span);
    }

    void lex_number() {
        SourceSpan span = here();
        std::string text;
        bool is_float = false;
        while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            is_float = true;
            text += advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
        } else if (peek() == '.' && !std::isalpha(static_cast<unsigned char>(peek(1))) && peek(1) != '_') {
            is_float = true;
            text += advance();
        }
        span.length = static_cast<int>(text.size());
        push(is_float ? TokenKind::FloatLit : TokenKind::IntLit, text, span);
    }

    void lex_ident() {
        SourceSpan span = here();
        std::string text;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') text += advance();
        span.length = static_cast<int>(text.size());
        auto it = keywords().find(text);
        push(it != keywords().end() ? it->second : TokenKind::Ident, text, span);
    }

    void lex_operator() {
        SourceSpan span = here();
        char c = advance();
        auto two = [&](char second, TokenKind twoKind, TokenKind oneKind) {
            if (peek() == second) {
                advance();
                span.length = 2;
                push(twoKind, std::string(1, c) + second, span);
            } else {
                push(oneKind, std::string(1, c), span);
            }
        };
        switch (c) {
            case '+': push(TokenKind::Plus, "+", span); break;
            case '-': push(TokenKind::Minus, "-", span); break;
            case '*': two('*', TokenKind::StarStar, TokenKind::Star); break;
            case '/': two('/', TokenKind::SlashSlash, TokenKind::Slash); break;
            case '%': push(TokenKind::Percent, "%", span); break;
            case '=': two('=', TokenKind::EqEq, TokenKind::Assign); break;
            case '<': two('=', TokenKind::LessEq, TokenKind::Less); break;
            case '>': two('=', TokenKind::GreaterEq, TokenKind::Greater); break;
            case '!':
                if (peek() == '=') {
                    advance();
                    span.length = 2;
                    push(TokenKind::NotEq, "!=", span);
                } else {
                    throw LexError(span, "unexpected character '!'");
                }
                break;
            case '(': push(TokenKind::LParen, "(", span); break;
            case ')': push(TokenKind::RParen, ")", span); break;
            case ',': push(TokenKind::Comma, ",", span); break;
            case ':': push(TokenKind::Colon, ":", span); break;
            default:
                throw LexError(span, std::string("illegal character '") + c + "'");
        }
    }

    std::vector<Token> run() {
        bool at_line_start = true;
        while (!at_end()) {
            if (at_line_start) {
                at_line_start = false;
                if (!handle_line_start()) {
                    at_line_start = true;
                    continue;
                }
                if (at_end()) break;
            }
            char c = peek();
            if (c == '\r') {
                advance();
                if (peek() != '\n') throw LexError(here(), "stray carriage return");
                continue;
            }
            if (c == '\n') {
                SourceSpan span = here();
                advance();
                push(TokenKind::Newline, "", span);
                at_line_start = true;
                continue;
            }
            if (c == ' ') {
                advance();
                continue;
            }
            if (c == '\t') {
                throw LexError(here(), "tab character outside indentation");
            }
            if (c == '#') {
                SourceSpan span = here();
                skip_comment();
                push(TokenKind::Newline, "", span);
                at_line_start = true;
                continue;
            }
            if (c == '"' || c == '\'') {
                lex_string();
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_number();
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                lex_ident();
                continue;
            }
            if (static_cast<unsigned char>(c) >= 0x80) {
                throw LexError(here(), "illegal non-ASCII character outside string literal");
            }
            lex_operator();
        }
        // Close the final line and any open blocks.
        if (!out.empty() && out.back().kind != TokenKind::Newline) {
            push(TokenKind::Newline, "", here(0));
        }
        while (indent_stack.size() > 1) {
            indent_stack.pop_back();
            push(TokenKind::Dedent, "", here(0));
        }
        push(TokenKind::EndOfFile, "", here(0));
        return std::move(out);
    }
};

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
    Lexer lexer(source);
    return lexer.run();
}

}  // namespace decomp::lang
