#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "archkit/diagnostics.hpp"

namespace archkit {

enum class TokenKind {
    Ident,
    String,
    Integer,
    Real,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Colon,
    Dot,
    Comma,
    Arrow,
    Equal,
    Pipe,
    Amp,
    End,
    Invalid,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // identifier spelling or unescaped string payload
    long long int_value = 0;
    double real_value = 0.0;
    SourceSpan span;

    bool is(TokenKind k) const { return kind == k; }
    bool is_ident(std::string_view word) const { return kind == TokenKind::Ident && text == word; }
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<Diagnostic> diagnostics;
};

// Tokenizes one file. Newlines are whitespace; statements are delimited by
// keywords and braces. Accepts LF and CRLF. `//` comments run to end of line.
inline LexResult lex(std::string_view text, const std::string& path) {
    LexResult out;
    size_t i = 0;
    int line = 1, col = 1;

    auto advance = [&](size_t n = 1) {
        for (size_t k = 0; k < n && i < text.size(); ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto push = [&](TokenKind kind, int start_line, int start_col, size_t start_i, std::string payload = {}) {
        Token t;
        t.kind = kind;
        t.text = std::move(payload);
        t.span = {path, start_line, start_col, static_cast<int>(i - start_i)};
        out.tokens.push_back(std::move(t));
        return &out.tokens.back();
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance();
            continue;
        }
        int sl = line, sc = col;
        size_t si = i;
        if (c == '"') {
            advance();
            std::string value;
            bool closed = false;
            while (i < text.size()) {
                char d = text[i];
                if (d == '\\' && i + 1 < text.size() && (text[i + 1] == '"' || text[i + 1] == '\\')) {
                    value += text[i + 1];
                    advance(2);
                    continue;
                }
                if (d == '"') {
                    advance();
                    closed = true;
                    break;
                }
                if (d == '\n') break;  // unterminated on this line
                value += d;
                advance();
            }
            if (!closed) {
                out.diagnostics.push_back({"PARSE-002", Severity::Error, "unterminated string literal",
                                           {path, sl, sc, static_cast<int>(i - si)}});
            }
            push(TokenKind::String, sl, sc, si, std::move(value));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '-' || c == '+') && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::string num;
            bool is_real = false;
            if (c == '-' || c == '+') {
                num += c;
                advance();
            }
            while (i < text.size()) {
                char d = text[i];
                if (std::isdigit(static_cast<unsigned char>(d))) {
                    num += d;
                    advance();
                } else if (d == '.' && i + 1 < text.size() &&
                           std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                    is_real = true;
                    num += d;
                    advance();
                } else if ((d == 'e' || d == 'E') && i + 1 < text.size() &&
                           (std::isdigit(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '-' ||
                            text[i + 1] == '+')) {
                    is_real = true;
                    num += d;
                    advance();
                    if (text[i] == '-' || text[i] == '+') {
                        num += text[i];
                        advance();
                    }
                } else {
                    break;
                }
            }
            Token* t = push(is_real ? TokenKind::Real : TokenKind::Integer, sl, sc, si, num);
            if (is_real)
                t->real_value = std::stod(num);
            else
                t->int_value = std::stoll(num);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            // Identifiers may contain '-' between alphanumeric runs, so ids
            // like SYS-REQ-001 and rule codes like M-PORT-001 lex as one token.
            std::string word;
            while (i < text.size()) {
                char d = text[i];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                    word += d;
                    advance();
                } else if (d == '-' && i + 1 < text.size() &&
                           (std::isalnum(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '_')) {
                    word += d;
                    advance();
                } else {
                    break;
                }
            }
            push(TokenKind::Ident, sl, sc, si, std::move(word));
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            advance(2);
            push(TokenKind::Arrow, sl, sc, si);
            continue;
        }
        TokenKind kind = TokenKind::Invalid;
        switch (c) {
            case '{': kind = TokenKind::LBrace; break;
            case '}': kind = TokenKind::RBrace; break;
            case '[': kind = TokenKind::LBracket; break;
            case ']': kind = TokenKind::RBracket; break;
            case '(': kind = TokenKind::LParen; break;
            case ')': kind = TokenKind::RParen; break;
            case ':': kind = TokenKind::Colon; break;
            case '.': kind = TokenKind::Dot; break;
            case ',': kind = TokenKind::Comma; break;
            case '=': kind = TokenKind::Equal; break;
            case '|': kind = TokenKind::Pipe; break;
            case '&': kind = TokenKind::Amp; break;
            default: break;
        }
        advance();
        push(kind, sl, sc, si, std::string(1, c));
        if (kind == TokenKind::Invalid) {
            out.diagnostics.push_back({"PARSE-001", Severity::Error,
                                       std::string("unexpected character '") + c + "'",
                                       {path, sl, sc, 1}});
        }
    }
    Token end;
    end.kind = TokenKind::End;
    end.span = {path, line, col, 0};
    out.tokens.push_back(std::move(end));
    return out;
}

}  // namespace archkit
