#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "provql/tstl/ast.hpp"

namespace provql::tstl {

enum class Tok : std::uint8_t {
    End, Ident, String, Int, Unit,
    // keywords
    Search, From, Where, With, Return, As, Db, Back, Forward, Track, Include, Exclude,
    Nodes, Edges, Limit, Step, Time, Display, Export, Like,
    // punctuation
    LBrace, RBrace, LParen, RParen, LBrack, RBrack, Comma, Semi, Arrow, AndAnd, OrOr,
    Bang, Pipe, Amp, Minus, Star, Eq, Ne, Lt, Le, Gt, Ge,
};

std::string_view to_string(Tok tok);

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier, string contents, or unit suffix
    std::int64_t number = 0;
    SourceLoc loc;
    std::size_t offset = 0;

    bool operator==(const Token& o) const { return kind == o.kind && text == o.text && number == o.number; }
};

/// Splits TSTL source into tokens; `//` comments run to end of line. An
/// integer immediately followed by `m`, `s` or `ms` yields a Unit token.
/// The sequence always ends with Tok::End. Throws ParseError.
std::vector<Token> tokenize(std::string_view text);

}  // namespace provql::tstl
