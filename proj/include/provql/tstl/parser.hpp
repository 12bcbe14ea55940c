#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "provql/tstl/ast.hpp"
#include "provql/tstl/lexer.hpp"

namespace provql::tstl {

/// Parses a whole script. Throws ParseError on the first syntax error.
///
/// Precedence inside expressions is `!` over `&&` over `||`; a comma between
/// predicates in a node declaration is a lowest-precedence `&&`. Relation
/// chains and graph expressions are left-associative with equal precedence
/// for their operators; parentheses group.
std::vector<Statement> parse(std::string_view text);
std::vector<Statement> parse(const std::vector<Token>& tokens, std::string_view text = {});

/// Parses a bare expression (API filters, tests).
ExprPtr parse_expr(std::string_view text);

/// Canonical source text. Binary children are parenthesised, so printing
/// and re-parsing yields an equal tree.
std::string to_tstl(const Expr& expr);
std::string to_tstl(const RelExpr& rel);
std::string to_tstl(const GraphExpr& graph);
std::string to_tstl(const Statement& stmt);
std::string to_tstl(const std::vector<Statement>& stmts);

std::string quote(std::string_view text);

}  // namespace provql::tstl
