#include "provql/tstl/lexer.hpp"

#include <array>
#include <cctype>
#include <limits>
#include <utility>

namespace provql::tstl {

namespace {

constexpr std::array<std::pair<std::string_view, Tok>, 20> kKeywords = {{
    {"search", Tok::Search}, {"from", Tok::From},       {"where", Tok::Where},     {"with", Tok::With},
    {"return", Tok::Return}, {"as", Tok::As},           {"db", Tok::Db},           {"back", Tok::Back},
    {"forward", Tok::Forward}, {"track", Tok::Track},   {"include", Tok::Include}, {"exclude", Tok::Exclude},
    {"nodes", Tok::Nodes},   {"edges", Tok::Edges},     {"limit", Tok::Limit},     {"step", Tok::Step},
    {"time", Tok::Time},     {"display", Tok::Display}, {"export", Tok::Export},   {"like", Tok::Like},
}};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : src_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token tok;
            tok.loc = {line_, col_};
            tok.offset = pos_;
            if (pos_ >= src_.size()) {
                tok.kind = Tok::End;
                out.push_back(std::move(tok));
                return out;
            }
            const char c = src_[pos_];
            if (ident_start(c)) {
                lex_word(tok);
            } else if (digit(c)) {
                lex_number(tok, out);
                continue;
            } else if (c == '"') {
                lex_string(tok);
            } else {
                lex_punct(tok);
            }
            out.push_back(std::move(tok));
        }
    }

private:
    [[noreturn]] void fail(SourceLoc loc, std::string msg) const { throw ParseError({loc, std::move(msg)}); }

    char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    void lex_word(Token& tok) {
        const std::size_t begin = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
        tok.text = std::string(src_.substr(begin, pos_ - begin));
        tok.kind = Tok::Ident;
        for (const auto& [word, kind] : kKeywords) {
            if (word == tok.text) tok.kind = kind;
        }
    }

    void lex_number(Token& tok, std::vector<Token>& out) {
        std::int64_t value = 0;
        while (pos_ < src_.size() && digit(src_[pos_])) {
            const int d = src_[pos_] - '0';
            if (value > (std::numeric_limits<std::int64_t>::max() - d) / 10) {
                fail(tok.loc, "integer literal out of range");
            }
            value = value * 10 + d;
            advance();
        }
        tok.kind = Tok::Int;
        tok.number = value;
        out.push_back(tok);

        // Unit suffix directly attached: 1s, 500ms, 2m.
        std::size_t len = 0;
        if (peek() == 'm' && peek(1) == 's') {
            len = 2;
        } else if (peek() == 's' || peek() == 'm') {
            len = 1;
        }
        if (len > 0 && !ident_char(peek(len))) {
            Token unit;
            unit.kind = Tok::Unit;
            unit.loc = {line_, col_};
            unit.offset = pos_;
            unit.text = std::string(src_.substr(pos_, len));
            for (std::size_t i = 0; i < len; ++i) advance();
            out.push_back(std::move(unit));
        }
    }

    void lex_string(Token& tok) {
        advance();  // opening quote
        std::string value;
        for (;;) {
            if (pos_ >= src_.size()) fail(tok.loc, "unterminated string literal");
            const char c = src_[pos_];
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\n') fail(tok.loc, "unterminated string literal");
            if (c == '\\') {
                advance();
                if (pos_ >= src_.size()) fail(tok.loc, "unterminated string literal");
                const char e = src_[pos_];
                switch (e) {
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    default: fail({line_, col_}, std::string("unknown escape '\\") + e + "'");
                }
                advance();
                continue;
            }
            value += c;
            advance();
        }
        tok.kind = Tok::String;
        tok.text = std::move(value);
    }

    void lex_punct(Token& tok) {
        const char c = src_[pos_];
        const char n = peek(1);
        auto one = [&](Tok k) {
            tok.kind = k;
            advance();
        };
        auto two = [&](Tok k) {
            tok.kind = k;
            advance();
            advance();
        };
        switch (c) {
            case '{': return one(Tok::LBrace);
            case '}': return one(Tok::RBrace);
            case '(': return one(Tok::LParen);
            case ')': return one(Tok::RParen);
            case '[': return one(Tok::LBrack);
            case ']': return one(Tok::RBrack);
            case ',': return one(Tok::Comma);
            case ';': return one(Tok::Semi);
            case '*': return one(Tok::Star);
            case '=': return one(Tok::Eq);
            case '-': return n == '>' ? two(Tok::Arrow) : one(Tok::Minus);
            case '&': return n == '&' ? two(Tok::AndAnd) : one(Tok::Amp);
            case '|': return n == '|' ? two(Tok::OrOr) : one(Tok::Pipe);
            case '!': return n == '=' ? two(Tok::Ne) : one(Tok::Bang);
            case '<': return n == '=' ? two(Tok::Le) : one(Tok::Lt);
            case '>': return n == '=' ? two(Tok::Ge) : one(Tok::Gt);
            default: break;
        }
        const auto byte = static_cast<unsigned char>(c);
        if (std::isprint(byte)) fail(tok.loc, std::string("unexpected character '") + c + "'");
        fail(tok.loc, "unexpected byte 0x" + [&] {
            const char* hex = "0123456789abcdef";
            return std::string{hex[byte >> 4], hex[byte & 0xf]};
        }());
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::string_view to_string(Tok tok) {
    switch (tok) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "identifier";
        case Tok::String: return "string";
        case Tok::Int: return "integer";
        case Tok::Unit: return "time unit";
        case Tok::Search: return "'search'";
        case Tok::From: return "'from'";
        case Tok::Where: return "'where'";
        case Tok::With: return "'with'";
        case Tok::Return: return "'return'";
        case Tok::As: return "'as'";
        case Tok::Db: return "'db'";
        case Tok::Back: return "'back'";
        case Tok::Forward: return "'forward'";
        case Tok::Track: return "'track'";
        case Tok::Include: return "'include'";
        case Tok::Exclude: return "'exclude'";
        case Tok::Nodes: return "'nodes'";
        case Tok::Edges: return "'edges'";
        case Tok::Limit: return "'limit'";
        case Tok::Step: return "'step'";
        case Tok::Time: return "'time'";
        case Tok::Display: return "'display'";
        case Tok::Export: return "'export'";
        case Tok::Like: return "'like'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrack: return "'['";
        case Tok::RBrack: return "']'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::Arrow: return "'->'";
        case Tok::AndAnd: return "'&&'";
        case Tok::OrOr: return "'||'";
        case Tok::Bang: return "'!'";
        case Tok::Pipe: return "'|'";
        case Tok::Amp: return "'&'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Eq: return "'='";
        case Tok::Ne: return "'!='";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace provql::tstl
